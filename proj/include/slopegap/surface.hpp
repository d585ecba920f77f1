#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace slopegap::surface {

// Piecewise return-time data for a lattice surface: each transversal piece is
// a triangle in local (a,b) coordinates tiled by convex polygons, each
// carrying the holonomy vector (x,y) realizing the next return,
// R(a,b) = y / (a(ax + by)).

struct Polygon {
  std::vector<std::array<double, 2>> vertices;  // CCW after validation
  double vx = 0, vy = 1;                        // return vector, vy > 0
};

enum class PieceCase { kNoMinusI, kMinusIPlusEigen, kMinusIMinusEigen };

// Slope multiplier of the triangle's lower edge: alpha, except twice that
// when -I is present with eigenvalue -1.
double case_multiplier(PieceCase c, double alpha);

struct PieceSpec {
  double x0 = 0;      // shortest horizontal component at the minimal cylinder
  double y0 = 1;      // minimal cylinder height; cusp vertex is (0, 1/y0)
  double alpha = 1;   // parabolic shear amount
  PieceCase kase = PieceCase::kMinusIPlusEigen;
  double a_min = 0;   // polygons keep a > a_min; cusp sliver handled in tail
  std::vector<Polygon> polygons;
};

struct SurfaceSpec {
  std::string name;
  double cm = 1;  // Lebesgue normalization: cm * total piece area = 1
  std::vector<PieceSpec> pieces;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
  double cusp_sliver_measure = 0;  // cm-normalized mass excluded by a_min
};

// Built-in square torus section: single triangle (0,1)-(1,0)-(1,1) with
// return vector (0,1), so R(a,b) = 1/(ab).
SurfaceSpec torus_spec();

ValidationReport validate(const SurfaceSpec& spec);

struct LoadResult {
  std::optional<SurfaceSpec> spec;  // present iff report.ok
  ValidationReport report;
};

// Reads the documented surface/1 JSON schema; structured report lists every
// schema or invariant violation.
LoadResult load_surface(const std::string& path);
LoadResult parse_surface_json(const std::string& text);

// R(a,b) = y / (a(ax + by)). Domain error when ax + by <= 0 (the vector is
// not valid at that point).
double piece_return_time(double vx, double vy, double a, double b);

// Infimum of the return time over all polygons: y / max(a(ax+by)), the max
// found by vertex + edge critical point search (exact for the quadratic
// restriction). Positive for every validating spec.
double min_return_time(const SurfaceSpec& spec);

// cm-normalized measure of {R <= x}, each polygon sliced against its own
// level curve by adaptive integration. Monotone in x; -> 1 as x -> infinity.
double surface_gap_cdf(const SurfaceSpec& spec, double x);

struct CompactnessResult {
  bool bounded_away = false;
  double margin = 0;  // lower bound on distance from {c <= R <= d} to the cusp
  bool vacuous = false;  // region empty (d below the minimum return time)
};

// Checks that {c <= R <= d} stays away from every piece's cusp vertex
// (0, 1/y0). Requires d finite.
CompactnessResult compactness_check(const SurfaceSpec& spec, double c, double d);

}  // namespace slopegap::surface
