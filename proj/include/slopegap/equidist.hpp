#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slopegap/bcz.hpp"

namespace slopegap::equidist {

// Uniform counting measure on the intersection points of the closed pushed
// horocycle with the transversal (the hitting measure rho).
struct EmpiricalMeasure {
  std::vector<bcz::Point> points;  // weights 1/|points| each
};

// Points of the exact BCZ orbit from (1/Q, 1) over one period (N(Q)-1
// points, total return time Q^2), converted to floating.
EmpiricalMeasure hitting_measure(long Q);

double rho_integral(const EmpiricalMeasure& mu,
                    const std::function<double(double, double)>& f);

// |2 zeta(2) N'(Q)/Q^2 - 1| with N'(Q) = hits per period = N(Q) - 1
// (half-open period convention; see README). The quantity bounded by
// K log(L)/sqrt(L), L = Q^2.
double counting_deviation(long Q);

// nu_{L}(f~) = (c_m/c_mu) (hits/Q^2) rho(f) = 2 zeta(2) (N'(Q)/Q^2) rho(f).
double nu_of_thickened(long Q,
                       const std::function<double(double, double)>& f);

// sup_x |empirical CDF of the renormalized gaps - hall_cdf(x)|, evaluated at
// all gap values (both one-sided limits) and midpoints.
double ks_discrepancy(long Q);

struct DecayFit {
  std::vector<double> lengths;  // L = Q^2, strictly increasing
  std::vector<double> errors;
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int excluded = 0;  // zero-error points dropped before fitting
};

enum class Quantity { kKs, kCounting, kRhoError };

Quantity quantity_from_name(const std::string& name);
std::string quantity_name(Quantity q);

// Least squares of log(error) against log(L); the acceptance layer compares
// the slope against the paper's rates.
DecayFit fit_decay(Quantity quantity, const std::vector<long>& Qs);
DecayFit fit_loglog(const std::vector<double>& lengths,
                    const std::vector<double>& errors);

// max |rho_Q(f) - m(f)| over the fixed test family (return-time interval
// indicators plus coordinate polynomials restricted to Omega).
double rho_error(long Q);

}  // namespace slopegap::equidist
