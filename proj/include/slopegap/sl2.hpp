#pragma once

#include <cstdint>
#include <functional>

namespace slopegap::sl2 {

inline constexpr double kZeta2 = 1.6449340668482264365;  // zeta(2) = pi^2/6

// Torus measure normalizations: m = c_m da db on Omega, mu = c_mu da db ds
// on the suspension.
inline constexpr double kTorusCm = 2.0;
inline constexpr double kTorusCmu = 1.0 / kZeta2;

// Row-major 2x2 real matrix. Constructors below all have determinant 1.
struct Mat2 {
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1;

  Mat2 operator*(const Mat2& o) const {
    return Mat2{m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  double det() const { return m00 * m11 - m01 * m10; }
  double frobenius_distance(const Mat2& o) const;
};

Mat2 geodesic(double t);             // diag(e^{t/2}, e^{-t/2})
Mat2 horocycle_unstable(double s);   // [[1,0],[-s,1]]
Mat2 horocycle_stable(double s);     // [[1,s],[0,1]]
Mat2 upper_triangular(double a, double b);  // [[a,b],[0,1/a]], a != 0
Mat2 rotation(double theta);         // [[cos,sin],[-sin,cos]]

// Local coordinates (a,b,s) of the suspension over the transversal: the point
// p_{a,b} h_s, with s in [-r, R(a,b) - r) for a configured offset r >= 0.
struct SuspensionPoint {
  double a = 1, b = 1, s = 0;
};

Mat2 suspension_matrix(const SuspensionPoint& p);  // p_{a,b} * h_s

struct UAKCoordinates {
  double u = 0;      // upper-unipotent parameter
  double t = 0;      // diagonal parameter
  double theta = 0;  // rotation angle
};

// g = p_{a,b} h_s = u_u g_t k_theta. Requires a > 0 and s != 0 (the theta
// coordinate chart is declared singular at s = 0 even though the limit
// exists; u -> ab there).
UAKCoordinates uak_decompose(const SuspensionPoint& p);
Mat2 uak_compose(const UAKCoordinates& c);

using TestFn = std::function<double(double, double)>;          // on Omega
using SuspensionFn = std::function<double(double, double, double)>;

// f~(a,b,s) = (c_m / (c_mu w)) f(a,b) 1[0 <= s <= w] on the suspension, zero
// off Omega. w must be below the surface's minimum return time.
SuspensionFn thicken(TestFn f, double w, double min_return_time,
                     double cm = kTorusCm, double cmu = kTorusCmu);

struct McResult {
  double value = 0;
  double std_error = 0;
  bool truncation_warning = false;  // support touched the cusp truncation
  long samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo for integrals against the suspension measure mu on the torus:
// (a,b) uniform on the triangle weighted by the return time (capped at
// r_max; R is unbounded at the cusp), s uniform on [0, R). Reproducible for
// a fixed (seed, thread count); threads <= 0 reads SLOPEGAP_THREADS.
McResult suspension_integral(const SuspensionFn& g, long samples,
                             std::uint64_t seed, double r_max = 1e4,
                             int threads = 0);

// Thread cap from SLOPEGAP_THREADS (default: hardware concurrency, max 8).
int thread_count(int requested = 0);

}  // namespace slopegap::sl2
