#pragma once

#include <gmpxx.h>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slopegap::exact {

// Arbitrary-precision integers and reduced rationals. mpq_class keeps values
// canonical (gcd(|num|, den) = 1, den >= 1) after canonicalize(), which is
// exactly the Rational contract; helpers below never leave a value
// un-canonicalized.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

inline Int rat_floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Exact three-way comparison of a rational against a double (every finite
// double converts exactly to a rational). Returns <0, 0, >0.
inline int cmp_double(const Rat& q, double x) {
  if (std::isnan(x)) throw std::domain_error("cmp_double: NaN endpoint");
  if (std::isinf(x)) return x > 0 ? -1 : 1;
  Rat r;
  mpq_set_d(r.get_mpq_t(), x);  // exact, no rounding
  return mpq_cmp(q.get_mpq_t(), r.get_mpq_t());
}

inline std::string to_string(const Rat& q) { return q.get_str(); }
inline std::string to_string(const Int& n) { return n.get_str(); }

}  // namespace slopegap::exact
