#pragma once

#include <functional>
#include <vector>

namespace slopegap::hall {

// {(a,b) in Omega : c <= 1/(ab) <= d}, the band between the hyperbolas
// ab = 1/c and ab = 1/d inside the triangle. d may be +infinity.
struct ReturnTimeRegion {
  double c = 0, d = 0;
};

// Adaptive Gauss-Legendre integration of a piecewise-analytic function;
// breakpoints mark the kinks. Absolute error well below 1e-9.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const std::vector<double>& breakpoints, double abs_tol = 1e-12);

// Euclidean area of the region (unnormalized; the surface module applies its
// own c_m to this kind of quantity).
double region_area(double c, double d);

// m-measure with the torus normalization c_m = 2, so region_measure((0,inf))
// is exactly 1.
double region_measure(const ReturnTimeRegion& r);

// F_cdf(x) = m{R <= x}. Zero for x <= 1, -> 1 as x -> infinity.
double hall_cdf(double x);

// Central difference (cdf(x+h) - cdf(x-h)) / (2h). A numeric derivative of
// the slicing integral, not a closed form.
double hall_density(double x, double h);

// Candidate kink locations of the cdf on the given sorted positive grid:
// local maxima of the third finite difference exceeding 5x the median,
// clustered. Hall's distribution has exactly two on [1, 10].
std::vector<double> detect_nonanalyticity(const std::vector<double>& grid);

}  // namespace slopegap::hall
