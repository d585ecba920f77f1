#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "slopegap/rational.hpp"

namespace slopegap::exact {

// Farey sequence of order Q: every reduced p/q in [0,1] with q <= Q, in
// increasing order. First term 0/1, last 1/1, consecutive terms satisfy
// p'q - pq' = 1.
struct FareySequence {
  long order = 0;
  std::vector<Rat> terms;
};

// Renormalized gaps Q^2 * (g_{i+1} - g_i), kept in occurrence order so they
// can be matched against BCZ orbit return times one-for-one.
struct GapMultiset {
  long order = 0;
  std::vector<Rat> gaps;
};

// Euler totients phi(1..n) by linear sieve. O(n) time and memory.
std::vector<long> totient_sieve(long n);

// Summatory totient Phi(Q) = sum_{n<=Q} phi(n).
Int totient_sum(long Q);

// N(Q) = 1 + Phi(Q) = |F(Q)|.
Int farey_count(long Q);

FareySequence farey_sequence(long Q);

// Streams consecutive-term pairs (p/q, p'/q') of F(Q) left to right without
// materializing the sequence. N(Q)-1 calls.
void for_each_neighbor_pair(
    long Q, const std::function<void(const Int& p, const Int& q, const Int& p2,
                                     const Int& q2)>& fn);

GapMultiset renormalized_gaps(long Q);

// Streaming version of renormalized_gaps, occurrence order.
void for_each_gap(long Q, const std::function<void(const Rat&)>& fn);

// |G_Q intersect [a,b]| with exact rational-vs-double comparisons at the
// endpoints (closed interval; see README on the endpoint convention).
long gap_count_in_interval(long Q, double a, double b);

// CSV: index,numerator,denominator
void write_sequence_csv(std::ostream& os, const FareySequence& fs);
// CSV: index,gap_numerator,gap_denominator,gap_float
void write_gaps_csv(std::ostream& os, const GapMultiset& gm);

}  // namespace slopegap::exact
