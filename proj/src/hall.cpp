#include "slopegap/hall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slopegap::hall {

namespace {

constexpr int kGaussN = 32;

struct GaussTable {
  double node[kGaussN];
  double weight[kGaussN];
  GaussTable() {
    // Legendre roots by Newton iteration on P_n, standard recurrence.
    for (int i = 0; i < kGaussN; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (kGaussN + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kGaussN; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = kGaussN * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= kGaussN; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = kGaussN * (x * p1 - p0) / (x * x - 1.0);
      node[i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussTable& gauss() {
  static const GaussTable t;
  return t;
}

double gauss_panel(const std::function<double(double)>& f, double lo, double hi) {
  const auto& t = gauss();
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int i = 0; i < kGaussN; ++i) s += t.weight[i] * f(mid + half * t.node[i]);
  return s * half;
}

double integrate_panel(const std::function<double(double)>& f, double lo,
                       double hi, double tol, int depth) {
  double whole = gauss_panel(f, lo, hi);
  double mid = 0.5 * (lo + hi);
  double split = gauss_panel(f, lo, mid) + gauss_panel(f, mid, hi);
  if (std::abs(whole - split) <= tol || depth >= 30) return split;
  return integrate_panel(f, lo, mid, tol / 2, depth + 1) +
         integrate_panel(f, mid, hi, tol / 2, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const std::vector<double>& breakpoints, double abs_tol) {
  if (!(lo < hi)) return 0.0;
  std::vector<double> pts{lo, hi};
  for (double p : breakpoints) {
    if (p > lo && p < hi) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] < 1e-300) continue;
    total += integrate_panel(f, pts[i], pts[i + 1],
                             abs_tol / static_cast<double>(pts.size()), 0);
  }
  return total;
}

double region_area(double c, double d) {
  if (!(c >= 0) || !(c < d)) {
    throw std::domain_error("region_area: need 0 <= c < d");
  }
  // Slice over a. R >= c <=> b <= 1/(ca) (upper curve); R <= d <=> b >= 1/(da)
  // (lower curve); intersect with the triangle's b = 1 ceiling and b = 1 - a
  // floor.
  const bool d_finite = std::isfinite(d);
  auto height = [c, d, d_finite](double a) {
    double upper = 1.0;
    if (c > 0) upper = std::min(1.0, 1.0 / (c * a));
    double lower = 1.0 - a;
    if (d_finite) lower = std::max(lower, 1.0 / (d * a));
    return std::max(0.0, upper - lower);
  };
  std::vector<double> pts;
  auto add_curve_breaks = [&pts](double x) {
    // curve b = 1/(xa): crosses b = 1 at a = 1/x, crosses b = 1-a where
    // a(1-a) = 1/x (real iff x >= 4)
    if (x <= 0) return;
    pts.push_back(1.0 / x);
    if (x >= 4.0) {
      double e = std::sqrt(1.0 - 4.0 / x);
      pts.push_back(0.5 * (1.0 - e));
      pts.push_back(0.5 * (1.0 + e));
    }
  };
  if (c > 0) add_curve_breaks(c);
  if (d_finite) add_curve_breaks(d);
  return integrate(height, 0.0, 1.0, pts);
}

double region_measure(const ReturnTimeRegion& r) {
  return 2.0 * region_area(r.c, r.d);
}

double hall_cdf(double x) {
  if (!(x >= 0)) throw std::domain_error("hall_cdf: x must be >= 0");
  if (x <= 1.0) return 0.0;  // ab <= 1 on Omega, so R >= 1
  return region_measure(ReturnTimeRegion{0.0, x});
}

double hall_density(double x, double h) {
  if (!(x > 0) || !(h > 0)) throw std::domain_error("hall_density: x, h must be > 0");
  if (h >= x) throw std::domain_error("hall_density: need h < x");
  return (hall_cdf(x + h) - hall_cdf(x - h)) / (2.0 * h);
}

std::vector<double> detect_nonanalyticity(const std::vector<double>& grid) {
  const size_t n = grid.size();
  if (n < 100) throw std::domain_error("detect_nonanalyticity: grid too coarse (< 100 points)");
  for (size_t i = 0; i < n; ++i) {
    if (!(grid[i] > 0)) throw std::domain_error("detect_nonanalyticity: grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::domain_error("detect_nonanalyticity: grid must be sorted increasing");
    }
  }
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = hall_cdf(grid[i]);

  const size_t m = n - 3;
  std::vector<double> a3(m);
  for (size_t i = 0; i < m; ++i) {
    a3[i] = std::abs(y[i + 3] - 3 * y[i + 2] + 3 * y[i + 1] - y[i]);
  }
  std::vector<double> sorted(a3);
  std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
  double median = sorted[m / 2];
  double threshold = 5.0 * median;

  // local maxima above threshold (boundary stencils eligible), then merge
  // runs of nearby candidates into one kink each
  std::vector<size_t> cands;
  for (size_t i = 0; i < m; ++i) {
    double left = i > 0 ? a3[i - 1] : -1.0;
    double right = i + 1 < m ? a3[i + 1] : -1.0;
    if (a3[i] > threshold && a3[i] >= left && a3[i] >= right) cands.push_back(i);
  }
  std::vector<double> kinks;
  const size_t radius = std::max<size_t>(1, n / 100);
  size_t k = 0;
  while (k < cands.size()) {
    size_t j = k, best = cands[k];
    while (j + 1 < cands.size() && cands[j + 1] - cands[j] <= radius) {
      ++j;
      if (a3[cands[j]] > a3[best]) best = cands[j];
    }
    kinks.push_back(0.5 * (grid[best] + grid[best + 3]));
    k = j + 1;
  }
  return kinks;
}

}  // namespace slopegap::hall
