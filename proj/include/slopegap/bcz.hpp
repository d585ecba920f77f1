#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "slopegap/rational.hpp"

namespace slopegap::bcz {

// A point of the Poincare section Omega = {0 < a <= 1, 0 < b <= 1, a+b > 1}
// in floating coordinates. Boundary convention: a+b = 1 is excluded, a = 1
// and b = 1 are included.
struct Point {
  double a = 0, b = 0;
};

// Exact counterpart, used for Farey cross-checks and long periodic orbits.
struct ExactPoint {
  exact::Rat a, b;
};

bool in_transversal(double a, double b);
bool in_transversal(const exact::Rat& a, const exact::Rat& b);
inline bool in_transversal(const Point& p) { return in_transversal(p.a, p.b); }
inline bool in_transversal(const ExactPoint& p) {
  return in_transversal(p.a, p.b);
}

// First-return map (a,b) -> (b, -a + floor((1+a)/b) * b).
//
// The floor is discontinuous, so the floating version guards it: when
// (1+a)/b lands within 1e-12 of an integer the step rounds to that integer
// and reports it via *guarded (exact arithmetic, available through the
// ExactPoint overload, is the authoritative path for rational points).
Point bcz_map(const Point& p, bool* guarded = nullptr);
ExactPoint bcz_map(const ExactPoint& p);

// Return time R(a,b) = 1/(ab); >= 1 everywhere on Omega.
double return_time(const Point& p);
exact::Rat return_time(const ExactPoint& p);

struct OrbitRecord {
  std::vector<Point> points;        // T^0 p, ..., T^{steps-1} p
  std::vector<double> return_times; // R at each recorded point
  double horocycle_length = 0;      // sum of return times
  long guarded_steps = 0;           // floor-guard activations
};

struct ExactOrbitRecord {
  std::vector<ExactPoint> points;
  std::vector<exact::Rat> return_times;
  exact::Rat horocycle_length;
};

OrbitRecord orbit(const Point& start, long steps);
ExactOrbitRecord orbit(const ExactPoint& start, long steps);

// True iff the exact orbit from (1/Q, 1) of length N(Q)-1 reproduces the
// renormalized Farey gaps of order Q in order and returns to its seed.
bool farey_orbit_equivalence(long Q);

// CSV: step,a,b,return_time (floating) or exact numerator/denominator columns.
void write_orbit_csv(std::ostream& os, const OrbitRecord& rec);
void write_orbit_csv(std::ostream& os, const ExactOrbitRecord& rec);

}  // namespace slopegap::bcz
