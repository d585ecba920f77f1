#include "slopegap/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slopegap/farey.hpp"
#include "slopegap/hall.hpp"
#include "slopegap/sl2.hpp"

namespace slopegap::equidist {

using exact::Int;

EmpiricalMeasure hitting_measure(long Q) {
  if (Q < 2) throw std::domain_error("hitting_measure: Q must be >= 2");
  EmpiricalMeasure mu;
  // orbit points are (q_i/Q, q_{i+1}/Q) over consecutive Farey denominators
  exact::for_each_neighbor_pair(
      Q, [&](const Int&, const Int& q, const Int&, const Int& q2) {
        mu.points.push_back(
            bcz::Point{q.get_d() / Q, q2.get_d() / Q});
      });
  return mu;
}

double rho_integral(const EmpiricalMeasure& mu,
                    const std::function<double(double, double)>& f) {
  if (mu.points.empty()) throw std::domain_error("rho_integral: empty measure");
  double s = 0;
  for (const auto& p : mu.points) s += f(p.a, p.b);
  return s / static_cast<double>(mu.points.size());
}

double counting_deviation(long Q) {
  if (Q < 2) throw std::domain_error("counting_deviation: Q must be >= 2");
  // hits per period = N(Q) - 1 = Phi(Q); exact integer, then one rounding
  double hits = exact::totient_sum(Q).get_d();
  return std::abs(2.0 * sl2::kZeta2 * hits / (static_cast<double>(Q) * Q) - 1.0);
}

double nu_of_thickened(long Q,
                       const std::function<double(double, double)>& f) {
  double hits = exact::totient_sum(Q).get_d();
  double rho = rho_integral(hitting_measure(Q), f);
  return 2.0 * sl2::kZeta2 * hits / (static_cast<double>(Q) * Q) * rho;
}

double ks_discrepancy(long Q) {
  if (Q < 2) throw std::domain_error("ks_discrepancy: Q must be >= 2");
  std::vector<double> gaps;
  exact::for_each_gap(Q, [&gaps](const exact::Rat& g) {
    gaps.push_back(g.get_d());
  });
  std::sort(gaps.begin(), gaps.end());
  const double n = static_cast<double>(gaps.size());
  double sup = 0;
  size_t i = 0;
  double prev_cum = 0;
  std::vector<std::pair<double, double>> steps;  // (value, cum fraction)
  while (i < gaps.size()) {
    size_t j = i;
    while (j < gaps.size() && gaps[j] == gaps[i]) ++j;
    double cum = static_cast<double>(j) / n;
    double G = hall::hall_cdf(gaps[i]);
    sup = std::max({sup, std::abs(cum - G), std::abs(prev_cum - G)});
    steps.emplace_back(gaps[i], cum);
    prev_cum = cum;
    i = j;
  }
  for (size_t k = 0; k + 1 < steps.size(); ++k) {
    double mid = 0.5 * (steps[k].first + steps[k + 1].first);
    sup = std::max(sup, std::abs(steps[k].second - hall::hall_cdf(mid)));
  }
  return sup;
}

namespace {

// Fixed test-function family for rho_error: interval indicators of the
// return time plus low-degree coordinate polynomials.
struct TestCase {
  std::function<double(double, double)> f;
  double m;  // m(f)
};

double triangle_poly_integral(int i, int j) {
  // 2 * int over {0<a<=1, 1-a<=b<=1} of a^i b^j; Gauss quadrature is exact
  // for polynomials at this order
  auto inner = [j](double a) {
    // int_{1-a}^{1} b^j db
    return (1.0 - std::pow(1.0 - a, j + 1)) / (j + 1);
  };
  auto f = [i, inner](double a) { return std::pow(a, i) * inner(a); };
  return 2.0 * hall::integrate(f, 0.0, 1.0, {});
}

std::vector<TestCase> test_family() {
  std::vector<TestCase> fam;
  const std::vector<std::pair<double, double>> intervals = {
      {1.0, 2.0}, {1.0, 1.7}, {2.0, 5.0}, {1.2, 3.0}, {4.0, 9.0}};
  for (auto [c, d] : intervals) {
    fam.push_back(TestCase{
        [c, d](double a, double b) {
          double r = 1.0 / (a * b);
          return (r >= c && r <= d) ? 1.0 : 0.0;
        },
        hall::region_measure(hall::ReturnTimeRegion{c, d})});
  }
  const std::vector<std::pair<int, int>> polys = {
      {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}};
  for (auto [i, j] : polys) {
    fam.push_back(TestCase{
        [i, j](double a, double b) { return std::pow(a, i) * std::pow(b, j); },
        triangle_poly_integral(i, j)});
  }
  return fam;
}

}  // namespace

double rho_error(long Q) {
  EmpiricalMeasure mu = hitting_measure(Q);
  double worst = 0;
  for (const auto& tc : test_family()) {
    worst = std::max(worst, std::abs(rho_integral(mu, tc.f) - tc.m));
  }
  return worst;
}

Quantity quantity_from_name(const std::string& name) {
  if (name == "ks") return Quantity::kKs;
  if (name == "counting") return Quantity::kCounting;
  if (name == "rho_error") return Quantity::kRhoError;
  throw std::domain_error("unknown quantity: " + name);
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::kKs: return "ks";
    case Quantity::kCounting: return "counting";
    case Quantity::kRhoError: return "rho_error";
  }
  return "?";
}

DecayFit fit_loglog(const std::vector<double>& lengths,
                    const std::vector<double>& errors) {
  if (lengths.size() != errors.size() || lengths.size() < 2) {
    throw std::domain_error("fit_loglog: need matching lists, >= 2 points");
  }
  for (size_t i = 1; i < lengths.size(); ++i) {
    if (!(lengths[i] > lengths[i - 1])) {
      throw std::domain_error("fit_loglog: lengths must be strictly increasing");
    }
  }
  DecayFit fit;
  fit.lengths = lengths;
  fit.errors = errors;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < lengths.size(); ++i) {
    double e = errors[i];
    if (e <= 0 ||
        (i == 0 && e < 10 * std::numeric_limits<double>::epsilon())) {
      ++fit.excluded;  // smallest-Q zero-ish errors carry no decay signal
      continue;
    }
    xs.push_back(std::log(lengths[i]));
    ys.push_back(std::log(e));
  }
  if (xs.size() < 2) throw std::domain_error("fit_loglog: not enough usable points");
  double n = static_cast<double>(xs.size());
  double xbar = 0, ybar = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= n;
  ybar /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    syy += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

DecayFit fit_decay(Quantity quantity, const std::vector<long>& Qs) {
  if (Qs.size() < 3) throw std::domain_error("fit_decay: need at least 3 Qs");
  std::vector<double> lengths, errors;
  for (long Q : Qs) {
    lengths.push_back(static_cast<double>(Q) * Q);
    switch (quantity) {
      case Quantity::kKs: errors.push_back(ks_discrepancy(Q)); break;
      case Quantity::kCounting: errors.push_back(counting_deviation(Q)); break;
      case Quantity::kRhoError: errors.push_back(rho_error(Q)); break;
    }
  }
  return fit_loglog(lengths, errors);
}

}  // namespace slopegap::equidist
