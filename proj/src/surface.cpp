#include "slopegap/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "slopegap/hall.hpp"

namespace slopegap::surface {

using nlohmann::json;

namespace {

double polygon_area(const std::vector<std::array<double, 2>>& v) {
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * s;  // signed; positive for CCW
}

bool is_convex_ccw(const std::vector<std::array<double, 2>>& v, double tol) {
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    const auto& c = v[(i + 2) % n];
    double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (cross < -tol) return false;
  }
  return true;
}

// Sutherland-Hodgman clip of a polygon by the half-plane left of a->b.
std::vector<std::array<double, 2>> clip_halfplane(
    const std::vector<std::array<double, 2>>& poly,
    const std::array<double, 2>& a, const std::array<double, 2>& b) {
  std::vector<std::array<double, 2>> out;
  const size_t n = poly.size();
  auto side = [&](const std::array<double, 2>& p) {
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
  };
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    double sp = side(p), sq = side(q);
    if (sp >= 0) out.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      double t = sp / (sp - sq);
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return out;
}

double intersection_area(const Polygon& p, const Polygon& q) {
  std::vector<std::array<double, 2>> cur = p.vertices;
  const size_t n = q.vertices.size();
  for (size_t i = 0; i < n && !cur.empty(); ++i) {
    cur = clip_halfplane(cur, q.vertices[i], q.vertices[(i + 1) % n]);
  }
  if (cur.size() < 3) return 0.0;
  return std::abs(polygon_area(cur));
}

// b-range of a convex polygon along the vertical line at a; empty if outside.
bool b_extent(const Polygon& poly, double a, double* lo, double* hi) {
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = -bmin;
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly.vertices[i];
    const auto& q = poly.vertices[(i + 1) % n];
    double a1 = p[0], a2 = q[0];
    if ((a1 <= a && a <= a2) || (a2 <= a && a <= a1)) {
      double b;
      if (a1 == a2) {
        bmin = std::min({bmin, p[1], q[1]});
        bmax = std::max({bmax, p[1], q[1]});
        continue;
      }
      double t = (a - a1) / (a2 - a1);
      b = p[1] + t * (q[1] - p[1]);
      bmin = std::min(bmin, b);
      bmax = std::max(bmax, b);
    }
  }
  if (!(bmin <= bmax)) return false;
  *lo = bmin;
  *hi = bmax;
  return true;
}

// phi(a,b) = a(ax + by), the denominator of the return time.
double phi_at(const Polygon& poly, double a, double b) {
  return a * (a * poly.vx + b * poly.vy);
}

double polygon_a_min(const Polygon& p) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices) m = std::min(m, v[0]);
  return m;
}

double polygon_a_max(const Polygon& p) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices) m = std::max(m, v[0]);
  return m;
}

// max of phi over the closed polygon. phi restricted to an edge is a
// quadratic in the edge parameter and the Hessian of phi is indefinite, so
// vertices + per-edge critical points cover the maximum.
double max_phi(const Polygon& poly) {
  double best = -std::numeric_limits<double>::infinity();
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly.vertices[i];
    const auto& q = poly.vertices[(i + 1) % n];
    best = std::max(best, phi_at(poly, p[0], p[1]));
    double da = q[0] - p[0], db = q[1] - p[1];
    double A = poly.vx * da * da + poly.vy * da * db;
    double B = 2 * poly.vx * p[0] * da + poly.vy * (p[0] * db + p[1] * da);
    if (A < 0) {
      double t = -B / (2 * A);
      if (t > 0 && t < 1) {
        best = std::max(best, phi_at(poly, p[0] + t * da, p[1] + t * db));
      }
    }
  }
  return best;
}

// Area of {phi >= level} inside the polygon, sliced along a. For fixed
// a > 0, phi is increasing in b (vy > 0), so the constraint is
// b >= (level - vx a^2) / (vy a).
double polygon_level_area(const Polygon& poly, double level) {
  double alo = polygon_a_min(poly), ahi = polygon_a_max(poly);
  if (!(ahi > alo)) return 0.0;
  auto threshold = [&](double a) {
    return (level - poly.vx * a * a) / (poly.vy * a);
  };
  auto height = [&](double a) {
    if (a <= 0) return 0.0;
    double lo, hi;
    if (!b_extent(poly, a, &lo, &hi)) return 0.0;
    return std::max(0.0, hi - std::max(lo, threshold(a)));
  };

  // Breakpoints: vertex abscissas plus crossings of the level curve with
  // each edge line (quadratic in a).
  std::vector<double> pts;
  const size_t n = poly.vertices.size();
  for (const auto& v : poly.vertices) pts.push_back(v[0]);
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly.vertices[i];
    const auto& q = poly.vertices[(i + 1) % n];
    double da = q[0] - p[0];
    if (da == 0) continue;
    double m = (q[1] - p[1]) / da;
    double c = p[1] - m * p[0];
    // a(vx a + vy(m a + c)) = level
    double A = poly.vx + poly.vy * m, B = poly.vy * c, C = -level;
    double e1 = std::min(p[0], q[0]), e2 = std::max(p[0], q[0]);
    if (A == 0) {
      if (B != 0) {
        double r = -C / B;
        if (r > e1 && r < e2) pts.push_back(r);
      }
      continue;
    }
    double disc = B * B - 4 * A * C;
    if (disc < 0) continue;
    double sq = std::sqrt(disc);
    for (double r : {(-B + sq) / (2 * A), (-B - sq) / (2 * A)}) {
      if (r > e1 && r < e2) pts.push_back(r);
    }
  }
  return hall::integrate(height, std::max(alo, 0.0), ahi, pts);
}

std::optional<PieceCase> case_from_name(const std::string& s) {
  if (s == "no-minus-I") return PieceCase::kNoMinusI;
  if (s == "minus-I-plus-eigen") return PieceCase::kMinusIPlusEigen;
  if (s == "minus-I-minus-eigen") return PieceCase::kMinusIMinusEigen;
  return std::nullopt;
}

}  // namespace

double case_multiplier(PieceCase c, double alpha) {
  return c == PieceCase::kMinusIMinusEigen ? 2.0 * alpha : alpha;
}

SurfaceSpec torus_spec() {
  SurfaceSpec s;
  s.name = "torus";
  s.cm = 2.0;
  PieceSpec piece;
  piece.x0 = 0;
  piece.y0 = 1;
  piece.alpha = 1;
  piece.kase = PieceCase::kMinusIPlusEigen;
  piece.a_min = 0;
  Polygon tri;
  tri.vertices = {{0, 1}, {1, 0}, {1, 1}};
  tri.vx = 0;
  tri.vy = 1;
  piece.polygons.push_back(tri);
  s.pieces.push_back(piece);
  return s;
}

ValidationReport validate(const SurfaceSpec& spec) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  if (spec.pieces.empty()) fail("spec has no pieces");
  if (!(spec.cm > 0)) fail("cm must be > 0");

  double total_piece_area = 0;
  double sliver = 0;
  for (size_t pi = 0; pi < spec.pieces.size(); ++pi) {
    const auto& piece = spec.pieces[pi];
    std::ostringstream tag;
    tag << "piece " << pi << ": ";
    if (!(piece.y0 > 0)) fail(tag.str() + "y0 must be > 0");
    if (!(piece.x0 >= 0)) fail(tag.str() + "x0 must be >= 0");
    if (!(piece.alpha > 0)) fail(tag.str() + "alpha must be > 0");
    if (!(piece.a_min >= 0) || piece.a_min >= 1) fail(tag.str() + "a_min must be in [0,1)");
    if (piece.polygons.empty()) fail(tag.str() + "no polygons");
    if (!rep.ok) continue;

    const double n_mult = case_multiplier(piece.kase, piece.alpha);
    auto roof = [&piece](double a) { return (1.0 - piece.x0 * a) / piece.y0; };
    auto floor_b = [&](double a) { return roof(a) - n_mult * a; };

    double poly_area_sum = 0;
    for (size_t qi = 0; qi < piece.polygons.size(); ++qi) {
      const auto& poly = piece.polygons[qi];
      std::ostringstream ptag;
      ptag << "piece " << pi << " polygon " << qi << ": ";
      if (poly.vertices.size() < 3) {
        fail(ptag.str() + "fewer than 3 vertices");
        continue;
      }
      if (!(poly.vy > 0)) fail(ptag.str() + "return vector needs y > 0");
      double area = polygon_area(poly.vertices);
      if (std::abs(area) < 1e-14) {
        fail(ptag.str() + "degenerate (zero area)");
        continue;
      }
      ;
      std::vector<std::array<double, 2>> ccw = poly.vertices;
      if (area < 0) std::reverse(ccw.begin(), ccw.end());
      if (!is_convex_ccw(ccw, 1e-12)) fail(ptag.str() + "not convex");
      poly_area_sum += std::abs(area);
      const double tol = 1e-9;
      for (const auto& v : ccw) {
        if (v[0] < -tol || v[0] > 1 + tol) {
          fail(ptag.str() + "vertex a outside [0,1]");
          break;
        }
        if (v[1] > roof(v[0]) + tol || v[1] < floor_b(v[0]) - tol) {
          fail(ptag.str() + "vertex outside the triangle bounds");
          break;
        }
        if (v[0] < piece.a_min - tol) {
          fail(ptag.str() + "vertex below a_min");
          break;
        }
      }
    }
    // pairwise interior-disjoint
    for (size_t qi = 0; qi < piece.polygons.size(); ++qi) {
      for (size_t qj = qi + 1; qj < piece.polygons.size(); ++qj) {
        double ov = intersection_area(piece.polygons[qi], piece.polygons[qj]);
        if (ov > 1e-9) {
          std::ostringstream msg;
          msg << "piece " << pi << ": polygons " << qi << " and " << qj
              << " overlap (area " << ov << ")";
          fail(msg.str());
        }
      }
    }
    // tiling: polygon areas fill the triangle minus the a_min sliver
    double tri_area = n_mult / 2.0;
    double sliver_area = n_mult * piece.a_min * piece.a_min / 2.0;
    sliver += sliver_area;
    if (std::abs(poly_area_sum - (tri_area - sliver_area)) >
        1e-9 * std::max(1.0, tri_area)) {
      std::ostringstream msg;
      msg << "piece " << pi << ": polygons do not tile the triangle (area "
          << poly_area_sum << " vs " << tri_area - sliver_area << ")";
      fail(msg.str());
    }
    total_piece_area += tri_area;
  }
  if (rep.ok && std::abs(spec.cm * total_piece_area - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "cm * total area = " << spec.cm * total_piece_area << ", expected 1";
    fail(msg.str());
  }
  rep.cusp_sliver_measure = spec.cm * sliver;
  return rep;
}

LoadResult parse_surface_json(const std::string& text) {
  LoadResult res;
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    res.report.ok = false;
    res.report.failures.push_back(std::string("JSON parse error: ") + e.what());
    return res;
  }
  auto fail = [&res](const std::string& msg) {
    res.report.ok = false;
    res.report.failures.push_back(msg);
  };
  if (!j.is_object()) {
    fail("top level must be an object");
    return res;
  }
  if (!j.contains("schema") || j["schema"] != "surface/1") {
    fail("missing or unsupported schema tag (expected \"surface/1\")");
  }
  SurfaceSpec spec;
  spec.name = j.value("name", std::string("unnamed"));
  if (!j.contains("cm") || !j["cm"].is_number()) {
    fail("missing numeric field cm");
  } else {
    spec.cm = j["cm"].get<double>();
  }
  if (!j.contains("pieces") || !j["pieces"].is_array()) {
    fail("missing pieces array");
  } else {
    for (const auto& pj : j["pieces"]) {
      PieceSpec piece;
      if (!pj.is_object()) {
        fail("piece entries must be objects");
        continue;
      }
      piece.x0 = pj.value("x0", 0.0);
      piece.y0 = pj.value("y0", 0.0);
      piece.alpha = pj.value("alpha", 0.0);
      piece.a_min = pj.value("a_min", 0.0);
      auto c = case_from_name(pj.value("case", std::string()));
      if (!c) {
        fail("piece case must be one of no-minus-I, minus-I-plus-eigen, minus-I-minus-eigen");
        piece.kase = PieceCase::kMinusIPlusEigen;
      } else {
        piece.kase = *c;
      }
      if (!pj.contains("polygons") || !pj["polygons"].is_array()) {
        fail("piece missing polygons array");
      } else {
        for (const auto& qj : pj["polygons"]) {
          Polygon poly;
          if (!qj.contains("vertices") || !qj["vertices"].is_array() ||
              !qj.contains("vector") || !qj["vector"].is_array() ||
              qj["vector"].size() != 2) {
            fail("polygon needs vertices [[a,b],...] and vector [x,y]");
            continue;
          }
          for (const auto& vj : qj["vertices"]) {
            if (!vj.is_array() || vj.size() != 2) {
              fail("polygon vertex must be [a,b]");
              continue;
            }
            poly.vertices.push_back({vj[0].get<double>(), vj[1].get<double>()});
          }
          poly.vx = qj["vector"][0].get<double>();
          poly.vy = qj["vector"][1].get<double>();
          piece.polygons.push_back(std::move(poly));
        }
      }
      spec.pieces.push_back(std::move(piece));
    }
  }
  if (!res.report.ok) return res;

  ValidationReport vrep = validate(spec);
  res.report = vrep;
  if (vrep.ok) res.spec = std::move(spec);
  return res;
}

LoadResult load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    LoadResult res;
    res.report.ok = false;
    res.report.failures.push_back("cannot open file: " + path);
    return res;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_surface_json(ss.str());
}

double piece_return_time(double vx, double vy, double a, double b) {
  if (!(a > 0)) throw std::domain_error("piece_return_time: a must be > 0");
  double denom = a * vx + b * vy;
  if (!(denom > 0)) {
    throw std::domain_error("piece_return_time: ax + by must be > 0");
  }
  return vy / (a * denom);
}

double min_return_time(const SurfaceSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : spec.pieces) {
    for (const auto& poly : piece.polygons) {
      if (std::abs(polygon_area(poly.vertices)) < 1e-14) {
        throw std::domain_error("min_return_time: degenerate polygon");
      }
      double m = max_phi(poly);
      if (m > 0) best = std::min(best, poly.vy / m);
    }
  }
  return best;
}

double surface_gap_cdf(const SurfaceSpec& spec, double x) {
  if (!(x >= 0)) throw std::domain_error("surface_gap_cdf: x must be >= 0");
  if (x == 0) return 0.0;
  if (std::isinf(x)) return 1.0;  // normalization invariant
  double total = 0;
  for (const auto& piece : spec.pieces) {
    for (const auto& poly : piece.polygons) {
      // R <= x  <=>  a(a vx + b vy) >= vy / x
      total += polygon_level_area(poly, poly.vy / x);
    }
  }
  return spec.cm * total;
}

CompactnessResult compactness_check(const SurfaceSpec& spec, double c, double d) {
  if (!(c >= 0) || !(c < d) || !std::isfinite(d)) {
    throw std::domain_error("compactness_check: need 0 <= c < d < infinity");
  }
  CompactnessResult res;
  if (d < min_return_time(spec)) {
    res.bounded_away = true;
    res.vacuous = true;
    res.margin = std::numeric_limits<double>::infinity();
    return res;
  }
  // On {R <= d}: a(a vx + b vy) >= vy/d and a vx + b vy <= max over the
  // polygon of that linear form, so a >= vy / (d * max_lin) > 0. The distance
  // to the cusp vertex (0, 1/y0) is at least that much.
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& piece : spec.pieces) {
    for (const auto& poly : piece.polygons) {
      double max_lin = 0;
      for (const auto& v : poly.vertices) {
        max_lin = std::max(max_lin, v[0] * poly.vx + v[1] * poly.vy);
      }
      if (max_lin <= 0) continue;  // region cannot enter this polygon
      margin = std::min(margin, poly.vy / (d * max_lin));
    }
  }
  res.margin = margin;
  res.bounded_away = margin > 0;
  return res;
}

}  // namespace slopegap::surface
