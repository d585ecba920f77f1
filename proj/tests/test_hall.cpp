#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "slopegap/hall.hpp"

using namespace slopegap;
using hall::ReturnTimeRegion;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("region measure endpoints") {
  CHECK(hall::region_measure({0.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hall::region_measure({0.0, kInf}) == doctest::Approx(1.0).epsilon(1e-12));
  // quadrature- and Monte-Carlo-confirmed value 1 - ln 2
  CHECK(std::abs(hall::region_measure({0.0, 2.0}) - (1.0 - std::log(2.0))) <= 1e-9);
  CHECK_THROWS_AS(hall::region_measure({2.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(hall::region_measure({-1.0, 1.0}), std::domain_error);
}

TEST_CASE("cdf values frozen against an independent quadrature oracle") {
  struct Row {
    double x, value;
  };
  // scipy.integrate.quad of the sliced region, abs tol 1e-13
  const Row rows[] = {
      {1.2, 0.029464072010076}, {1.5, 0.126046522522448},
      {2.0, 0.306852819440055}, {3.0, 0.600925140887927},
      {5.0, 0.893980699574085}, {10.0, 0.977573725938820},
      {1000.0, 0.999997997996660}};
  for (const auto& r : rows) {
    CHECK(std::abs(hall::hall_cdf(r.x) - r.value) <= 1e-9);
  }
  CHECK(hall::hall_cdf(0.5) == 0.0);
  CHECK(hall::hall_cdf(1.0) == 0.0);
  CHECK(std::abs(hall::hall_cdf(1e6) - 1.0) <= 1e-4);
}

TEST_CASE("cdf is monotone over 1e3 random pairs") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unif(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    double x1 = unif(rng), x2 = unif(rng);
    if (x1 > x2) std::swap(x1, x2);
    CHECK(hall::hall_cdf(x1) <= hall::hall_cdf(x2) + 1e-12);
  }
}

TEST_CASE("band measure is additive against cdf differences (1e3 intervals)") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unif(0.0, 15.0);
  for (int i = 0; i < 1000; ++i) {
    double c = unif(rng), d = unif(rng);
    if (c > d) std::swap(c, d);
    if (d - c < 1e-6) continue;
    double band = hall::region_measure({c, d});
    double diff = hall::hall_cdf(d) - hall::hall_cdf(c);
    CHECK(std::abs(band - diff) <= 2e-9);
  }
}

TEST_CASE("density: flat below the minimum return time, stencil-consistent at 2") {
  CHECK(hall::hall_density(0.5, 0.4) == 0.0);
  CHECK(hall::hall_density(0.5, 0.1) == 0.0);

  double h = 1e-4;
  double central = hall::hall_density(2.0, h);
  double forward = (hall::hall_cdf(2.0 + h) - hall::hall_cdf(2.0)) / h;
  double backward = (hall::hall_cdf(2.0) - hall::hall_cdf(2.0 - h)) / h;
  CHECK(std::abs(central - forward) / central <= 1e-4);
  CHECK(std::abs(central - backward) / central <= 1e-4);

  CHECK_THROWS_AS(hall::hall_density(-1.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(hall::hall_density(0.5, 0.5), std::domain_error);
}

TEST_CASE("density integrates back to the cdf over [1, 1e3]") {
  // composite Simpson on log-spaced panels; target within 1e-3 of cdf(1e3)
  const int n = 4000;
  double lo = 1.0, hi = 1000.0;
  double sum = 0.0;
  auto dens = [](double x) { return hall::hall_density(x, 1e-5); };
  for (int i = 0; i < n; ++i) {
    double x0 = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    double x1 = lo * std::pow(hi / lo, static_cast<double>(i + 1) / n);
    double xm = 0.5 * (x0 + x1);
    sum += (x1 - x0) / 6.0 * (dens(x0) + 4.0 * dens(xm) + dens(x1));
  }
  CHECK(std::abs(sum - hall::hall_cdf(1000.0)) <= 1e-3);
}

TEST_CASE("non-analyticity detector") {
  auto grid = [](double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1.0);
    return xs;
  };

  auto flat = hall::detect_nonanalyticity(grid(0.5, 0.9, 500));
  CHECK(flat.empty());

  auto tail = hall::detect_nonanalyticity(grid(20.0, 30.0, 1000));
  CHECK(tail.empty());

  auto kinks = hall::detect_nonanalyticity(grid(1.0, 10.0, 10000));
  CHECK(kinks.size() == 2);

  CHECK_THROWS_AS(hall::detect_nonanalyticity(grid(1.0, 10.0, 50)),
                  std::domain_error);
  std::vector<double> unsorted = {1.0, 3.0, 2.0};
  unsorted.resize(200, 5.0);
  CHECK_THROWS_AS(hall::detect_nonanalyticity(unsorted), std::domain_error);
}
