#include "slopegap/farey.hpp"

#include <cmath>
#include <ostream>

#include "slopegap/csv.hpp"

namespace slopegap::exact {

std::vector<long> totient_sieve(long n) {
  if (n < 0) throw std::domain_error("totient_sieve: n must be >= 0");
  std::vector<long> phi(static_cast<size_t>(n) + 1);
  std::vector<long> primes;
  primes.reserve(n > 16 ? static_cast<size_t>(n / 8) : 8);
  if (n >= 1) phi[1] = 1;
  for (long i = 2; i <= n; ++i) {
    if (phi[i] == 0) {  // i is prime
      phi[i] = i - 1;
      primes.push_back(i);
    }
    for (long p : primes) {
      if (p > n / i) break;
      if (i % p == 0) {
        phi[i * p] = phi[i] * p;
        break;
      }
      phi[i * p] = phi[i] * (p - 1);
    }
  }
  return phi;
}

Int totient_sum(long Q) {
  if (Q < 1) throw std::domain_error("totient_sum: Q must be >= 1");
  auto phi = totient_sieve(Q);
  Int sum = 0;
  for (long n = 1; n <= Q; ++n) sum += phi[n];
  return sum;
}

Int farey_count(long Q) {
  if (Q < 1) throw std::domain_error("farey_count: Q must be >= 1");
  return Int(1) + totient_sum(Q);
}

void for_each_neighbor_pair(
    long Q, const std::function<void(const Int&, const Int&, const Int&,
                                     const Int&)>& fn) {
  if (Q < 1) throw std::domain_error("farey: Q must be >= 1");
  // Standard next-term recurrence: from consecutive p/q, p'/q' the next term
  // is (kp' - p)/(kq' - q) with k = floor((q + Q)/q').
  Int p = 0, q = 1, p2 = 1, q2 = Q;
  fn(p, q, p2, q2);
  while (!(p2 == 1 && q2 == 1)) {
    Int k = (q + Q) / q2;
    Int p3 = k * p2 - p;
    Int q3 = k * q2 - q;
    p = p2;
    q = q2;
    p2 = p3;
    q2 = q3;
    fn(p, q, p2, q2);
  }
}

FareySequence farey_sequence(long Q) {
  if (Q < 1) throw std::domain_error("farey_sequence: Q must be >= 1");
  FareySequence fs;
  fs.order = Q;
  fs.terms.push_back(make_rat(Int(0), Int(1)));
  for_each_neighbor_pair(Q, [&fs](const Int&, const Int&, const Int& p2,
                                  const Int& q2) {
    fs.terms.push_back(make_rat(p2, q2));
  });
  return fs;
}

void for_each_gap(long Q, const std::function<void(const Rat&)>& fn) {
  if (Q < 2) throw std::domain_error("renormalized_gaps: Q must be >= 2");
  Int Q2 = Int(Q) * Q;
  for_each_neighbor_pair(Q, [&](const Int&, const Int& q, const Int&,
                                const Int& q2) {
    // neighbor gap is 1/(q q'), renormalized by Q^2
    fn(make_rat(Q2, q * q2));
  });
}

GapMultiset renormalized_gaps(long Q) {
  GapMultiset gm;
  gm.order = Q;
  for_each_gap(Q, [&gm](const Rat& g) { gm.gaps.push_back(g); });
  return gm;
}

long gap_count_in_interval(long Q, double a, double b) {
  if (!(a >= 0) || !(a < b)) {
    throw std::domain_error("gap_count_in_interval: need 0 <= a < b");
  }
  long count = 0;
  for_each_gap(Q, [&](const Rat& g) {
    if (cmp_double(g, a) >= 0 && (std::isinf(b) || cmp_double(g, b) <= 0)) {
      ++count;
    }
  });
  return count;
}

void write_sequence_csv(std::ostream& os, const FareySequence& fs) {
  os << "index,numerator,denominator\n";
  for (size_t i = 0; i < fs.terms.size(); ++i) {
    os << i << ',' << fs.terms[i].get_num().get_str() << ','
       << fs.terms[i].get_den().get_str() << '\n';
  }
}

void write_gaps_csv(std::ostream& os, const GapMultiset& gm) {
  os << "index,gap_numerator,gap_denominator,gap_float\n";
  for (size_t i = 0; i < gm.gaps.size(); ++i) {
    os << i << ',' << gm.gaps[i].get_num().get_str() << ','
       << gm.gaps[i].get_den().get_str() << ','
       << csv::fmt(gm.gaps[i].get_d()) << '\n';
  }
}

}  // namespace slopegap::exact
