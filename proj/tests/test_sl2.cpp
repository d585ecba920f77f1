#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "slopegap/hall.hpp"
#include "slopegap/sl2.hpp"

using namespace slopegap;
using sl2::Mat2;
using sl2::SuspensionPoint;

namespace {

SuspensionPoint random_suspension_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double a, b;
  do {
    a = unif(rng);
    b = unif(rng);
    if (a + b < 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
  } while (a <= 0 || b <= 0);
  double mag = std::pow(10.0, -3.0 + 6.0 * unif(rng));
  double s = unif(rng) < 0.5 ? -mag : mag;
  return SuspensionPoint{a, b, s};
}

}  // namespace

TEST_CASE("flow generators have the stated entries") {
  Mat2 id = sl2::geodesic(0.0);
  CHECK(id.m00 == 1.0);
  CHECK(id.m01 == 0.0);
  CHECK(id.m10 == 0.0);
  CHECK(id.m11 == 1.0);

  Mat2 h1 = sl2::horocycle_unstable(1.0);
  CHECK(h1.m00 == 1.0);
  CHECK(h1.m01 == 0.0);
  CHECK(h1.m10 == -1.0);
  CHECK(h1.m11 == 1.0);

  Mat2 u2 = sl2::horocycle_stable(2.0);
  CHECK(u2.m01 == 2.0);
  CHECK(u2.m10 == 0.0);

  Mat2 p = sl2::upper_triangular(2.0, 3.0);
  CHECK(p.m00 == 2.0);
  CHECK(p.m01 == 3.0);
  CHECK(p.m10 == 0.0);
  CHECK(p.m11 == 0.5);
  CHECK_THROWS_AS(sl2::upper_triangular(0.0, 1.0), std::domain_error);
}

TEST_CASE("determinant stays 1 through 1e4 random generator products") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Mat2 acc;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Mat2 g;
    switch (i % 4) {
      case 0: g = sl2::geodesic(unif(rng) * 0.1); break;
      case 1: g = sl2::horocycle_unstable(unif(rng) * 0.1); break;
      case 2: g = sl2::horocycle_stable(unif(rng) * 0.1); break;
      default: g = sl2::rotation(unif(rng)); break;
    }
    acc = acc * g;
    worst = std::max(worst, std::abs(acc.det() - 1.0));
    if (i % 500 == 499) acc = Mat2{};  // keep entries from drifting large
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("conjugation identity g_t^{-1} h_s = h_{s e^t} g_t^{-1}") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> ts(-5.0, 5.0);
  std::uniform_real_distribution<double> ss(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    double t = ts(rng), s = ss(rng);
    Mat2 lhs = sl2::geodesic(-t) * sl2::horocycle_unstable(s);
    Mat2 rhs = sl2::horocycle_unstable(s * std::exp(t)) * sl2::geodesic(-t);
    CHECK(std::abs(lhs.m00 - rhs.m00) <= 1e-12);
    CHECK(std::abs(lhs.m01 - rhs.m01) <= 1e-12);
    CHECK(std::abs(lhs.m10 - rhs.m10) <= 1e-12);
    CHECK(std::abs(lhs.m11 - rhs.m11) <= 1e-12);
  }
}

TEST_CASE("UAK decomposition of the worked point (1, 0, 1)") {
  SuspensionPoint p{1.0, 0.0, 1.0};
  auto c = sl2::uak_decompose(p);
  CHECK(c.u == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(c.t == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(c.theta == doctest::Approx(M_PI / 4).epsilon(1e-15));
  // u_{-1/2} g_{-ln 2} k_{pi/4} = h_1 to 1e-12
  CHECK(sl2::uak_compose(c).frobenius_distance(sl2::horocycle_unstable(1.0)) <=
        1e-12);
}

TEST_CASE("UAK round trip at (1,1,1) and over 1e4 random points") {
  SuspensionPoint q{1.0, 1.0, 1.0};
  auto cq = sl2::uak_decompose(q);
  CHECK(sl2::uak_compose(cq).frobenius_distance(sl2::suspension_matrix(q)) <=
        1e-10);

  std::mt19937_64 rng(0x5a5aULL);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    SuspensionPoint p = random_suspension_point(rng);
    auto c = sl2::uak_decompose(p);
    worst = std::max(worst, sl2::uak_compose(c).frobenius_distance(
                                sl2::suspension_matrix(p)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("theta branch follows the sign of s") {
  auto plus = sl2::uak_decompose({0.7, 0.8, 2.5});
  CHECK(plus.theta > 0);
  CHECK(plus.theta < M_PI);
  auto minus = sl2::uak_decompose({0.7, 0.8, -2.5});
  CHECK(minus.theta < 0);
  CHECK(minus.theta > -M_PI);
}

TEST_CASE("u tends to ab as s -> 0+ and s = 0 is rejected") {
  double a = 0.7, b = 0.8;
  double prev = 1e9;
  for (double s : {1e-2, 1e-4, 1e-6}) {
    auto c = sl2::uak_decompose({a, b, s});
    double err = std::abs(c.u - a * b);
    CHECK(err <= 2.0 * a * a * s);
    CHECK(err < prev);
    prev = err;
  }
  CHECK_THROWS_AS(sl2::uak_decompose({0.7, 0.8, 0.0}), std::domain_error);
  CHECK_THROWS_AS(sl2::uak_decompose({-0.1, 0.8, 1.0}), std::domain_error);
}

TEST_CASE("thickening: normalization, support, width validation") {
  auto one = [](double, double) { return 1.0; };
  auto ft = sl2::thicken(one, 0.5, 1.0);
  // torus w = 1/2: c_m/(c_mu w) = 4 zeta(2) on the slab
  CHECK(ft(0.8, 0.9, 0.3) == doctest::Approx(4.0 * sl2::kZeta2).epsilon(1e-14));
  CHECK(ft(0.8, 0.9, 0.5 + 1e-9) == 0.0);  // s past the slab
  CHECK(ft(0.8, 0.9, -1e-9) == 0.0);
  CHECK(ft(0.3, 0.3, 0.2) == 0.0);  // outside Omega

  auto zero = [](double, double) { return 0.0; };
  auto zt = sl2::thicken(zero, 0.5, 1.0);
  CHECK(zt(0.8, 0.9, 0.25) == 0.0);

  CHECK_THROWS_AS(sl2::thicken(one, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(sl2::thicken(one, 1.5, 1.0), std::domain_error);
}

TEST_CASE("suspension integral: normalization and truncation behavior") {
  auto one = [](double, double, double) { return 1.0; };
  auto tight = sl2::suspension_integral(one, 1000000, 2024, 100.0);
  auto loose = sl2::suspension_integral(one, 1000000, 2024, 1e4);
  CHECK(tight.truncation_warning);  // g = 1 reaches past any truncation
  CHECK(loose.truncation_warning);
  CHECK(std::abs(loose.value - 1.0) < std::abs(tight.value - 1.0));
  CHECK(std::abs(loose.value - 1.0) <= 0.005);
  CHECK(std::abs(tight.value - 1.0) >= 0.008);  // ~1.2e-2 mass beyond R=100
}

TEST_CASE("mu(thickened f) recovers m(f) for the interval indicator") {
  auto f = [](double a, double b) {
    double r = 1.0 / (a * b);
    return (r >= 1.0 && r <= 2.0) ? 1.0 : 0.0;
  };
  double target = hall::region_measure({1.0, 2.0});
  auto ft = sl2::thicken(f, 0.5, 1.0);
  auto mc = sl2::suspension_integral(ft, 400000, 77);
  CHECK_FALSE(mc.truncation_warning);  // compact support away from the cusp
  CHECK(std::abs(mc.value - target) <= 3.0 * mc.std_error);
}

TEST_CASE("suspension integral is reproducible for fixed seed and threads") {
  auto g = [](double a, double b, double s) {
    return s <= 0.4 ? a * b : 0.0;
  };
  auto r1 = sl2::suspension_integral(g, 200000, 31415, 1e4, 2);
  auto r2 = sl2::suspension_integral(g, 200000, 31415, 1e4, 2);
  CHECK(r1.value == r2.value);
  CHECK(r1.std_error == r2.std_error);
}
