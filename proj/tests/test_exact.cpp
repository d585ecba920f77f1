#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <sstream>

#include "slopegap/farey.hpp"

using namespace slopegap;
using exact::Int;
using exact::Rat;

namespace {

// Independent oracle: enumerate all reduced p/q with q <= Q by gcd, sort.
std::vector<Rat> farey_brute(long Q) {
  std::vector<Rat> out;
  for (long q = 1; q <= Q; ++q) {
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) == 1) out.push_back(exact::make_rat(p, q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

long count_coprime_pairs(long Q) {  // brute-force gcd count of |F(Q)|
  long n = 0;
  for (long q = 1; q <= Q; ++q) {
    for (long p = 0; p <= q; ++p) {
      // only q=1 contributes endpoints: gcd(0,q)=q and gcd(q,q)=q otherwise
      if (std::gcd(p, q) == 1) ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("farey_sequence matches the stated small orders") {
  auto f1 = exact::farey_sequence(1);
  REQUIRE(f1.terms.size() == 2);
  CHECK(f1.terms[0] == 0);
  CHECK(f1.terms[1] == 1);

  auto f2 = exact::farey_sequence(2);
  REQUIRE(f2.terms.size() == 3);
  CHECK(f2.terms[1] == exact::make_rat(1, 2));

  auto f3 = exact::farey_sequence(3);
  REQUIRE(f3.terms.size() == 5);
  CHECK(f3.terms[1] == exact::make_rat(1, 3));
  CHECK(f3.terms[2] == exact::make_rat(1, 2));
  CHECK(f3.terms[3] == exact::make_rat(2, 3));
  CHECK(f3.terms[4] == 1);
}

TEST_CASE("farey_sequence equals brute-force enumeration up to order 40") {
  for (long Q = 1; Q <= 40; ++Q) {
    auto fast = exact::farey_sequence(Q);
    auto slow = farey_brute(Q);
    REQUIRE(fast.terms.size() == slow.size());
    for (size_t i = 0; i < slow.size(); ++i) CHECK(fast.terms[i] == slow[i]);
  }
}

TEST_CASE("farey_sequence rejects order 0") {
  CHECK_THROWS_AS(exact::farey_sequence(0), std::domain_error);
  CHECK_THROWS_AS(exact::farey_count(0), std::domain_error);
}

TEST_CASE("sieve count equals enumeration and neighbor identity holds, Q <= 500") {
  // one streaming pass per order: count terms and check p'q - pq' = 1
  for (long Q = 1; Q <= 500; ++Q) {
    long terms = 1;  // leading 0/1
    bool identity = true;
    exact::for_each_neighbor_pair(
        Q, [&](const Int& p, const Int& q, const Int& p2, const Int& q2) {
          ++terms;
          if (p2 * q - p * q2 != 1) identity = false;
        });
    CHECK(identity);
    CHECK(exact::farey_count(Q) == terms);
  }
}

TEST_CASE("farey_count examples and asymptotics") {
  CHECK(exact::farey_count(1) == 2);
  CHECK(exact::farey_count(3) == 5);
  CHECK(exact::farey_count(100) == count_coprime_pairs(100));
  // N(Q)/Q^2 -> 3/pi^2
  double ratio = exact::farey_count(10000).get_d() / 1e8;
  CHECK(std::abs(ratio - 3.0 / (M_PI * M_PI)) <= 5e-3);
}

TEST_CASE("renormalized gaps: small orders, exact sums, lower bound") {
  auto g2 = exact::renormalized_gaps(2);
  REQUIRE(g2.gaps.size() == 2);
  CHECK(g2.gaps[0] == 2);
  CHECK(g2.gaps[1] == 2);

  auto g3 = exact::renormalized_gaps(3);
  REQUIRE(g3.gaps.size() == 4);
  CHECK(g3.gaps[0] == 3);
  CHECK(g3.gaps[1] == exact::make_rat(3, 2));
  CHECK(g3.gaps[2] == exact::make_rat(3, 2));
  CHECK(g3.gaps[3] == 3);

  CHECK_THROWS_AS(exact::renormalized_gaps(1), std::domain_error);

  for (long Q : {2L, 3L, 10L, 50L, 137L, 300L}) {
    auto gm = exact::renormalized_gaps(Q);
    CHECK(static_cast<long>(gm.gaps.size()) ==
          exact::farey_count(Q).get_si() - 1);
    Rat sum = 0;
    Rat minimum = gm.gaps[0];
    Int Q2 = Int(Q) * Q;
    for (const auto& g : gm.gaps) {
      sum += g / Rat(Q2);  // un-renormalize
      CHECK(g >= 1);
      if (g < minimum) minimum = g;
    }
    CHECK(sum == 1);  // telescoping 0/1 -> 1/1
    CHECK(minimum == exact::make_rat(Q, Q - 1));
  }
}

TEST_CASE("gap_count_in_interval with exact endpoint comparisons") {
  CHECK(exact::gap_count_in_interval(3, 0.0, 1.0 - 1e-15) == 0);
  CHECK(exact::gap_count_in_interval(3, 1.0, 2.0) == 2);
  CHECK(exact::gap_count_in_interval(
            3, 0.0, std::numeric_limits<double>::infinity()) == 4);
  CHECK(exact::gap_count_in_interval(3, 1.5, 1.5000000001) == 2);  // exact tie
  CHECK_THROWS_AS(exact::gap_count_in_interval(3, 2.0, 1.0), std::domain_error);
}

TEST_CASE("csv export") {
  std::ostringstream seq;
  exact::write_sequence_csv(seq, exact::farey_sequence(3));
  CHECK(seq.str() ==
        "index,numerator,denominator\n"
        "0,0,1\n1,1,3\n2,1,2\n3,2,3\n4,1,1\n");

  std::ostringstream gaps;
  exact::write_gaps_csv(gaps, exact::renormalized_gaps(2));
  CHECK(gaps.str() ==
        "index,gap_numerator,gap_denominator,gap_float\n"
        "0,2,1,2\n1,2,1,2\n");
}

TEST_CASE("totient sieve spot values") {
  auto phi = exact::totient_sieve(100);
  CHECK(phi[1] == 1);
  CHECK(phi[2] == 1);
  CHECK(phi[12] == 4);
  CHECK(phi[97] == 96);
  CHECK(phi[100] == 40);
  CHECK(exact::totient_sum(100) == 3044);
}
