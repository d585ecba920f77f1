#include "slopegap/bcz.hpp"

#include <cmath>
#include <ostream>

#include "slopegap/csv.hpp"
#include "slopegap/farey.hpp"

namespace slopegap::bcz {

using exact::Int;
using exact::Rat;

namespace {
constexpr double kFloorGuard = 1e-12;
}

bool in_transversal(double a, double b) {
  return a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0 && a + b > 1.0;
}

bool in_transversal(const Rat& a, const Rat& b) {
  return a > 0 && a <= 1 && b > 0 && b <= 1 && a + b > 1;
}

Point bcz_map(const Point& p, bool* guarded) {
  if (!in_transversal(p)) throw std::domain_error("bcz_map: point outside Omega");
  double r = (1.0 + p.a) / p.b;
  double k = std::floor(r);
  double nearest = std::round(r);
  if (std::abs(r - nearest) < kFloorGuard) {
    k = nearest;
    if (guarded) *guarded = true;
  }
  return Point{p.b, -p.a + k * p.b};
}

ExactPoint bcz_map(const ExactPoint& p) {
  if (!in_transversal(p)) throw std::domain_error("bcz_map: point outside Omega");
  Rat r = (Rat(1) + p.a) / p.b;
  Int k = exact::rat_floor(r);
  Rat nb = -p.a + Rat(k) * p.b;
  nb.canonicalize();
  return ExactPoint{p.b, nb};
}

double return_time(const Point& p) {
  if (!in_transversal(p)) throw std::domain_error("return_time: point outside Omega");
  return 1.0 / (p.a * p.b);
}

Rat return_time(const ExactPoint& p) {
  if (!in_transversal(p)) throw std::domain_error("return_time: point outside Omega");
  return exact::make_rat(Int(1), Int(1)) / (p.a * p.b);
}

OrbitRecord orbit(const Point& start, long steps) {
  if (steps < 0) throw std::domain_error("orbit: steps must be >= 0");
  OrbitRecord rec;
  rec.points.reserve(steps);
  rec.return_times.reserve(steps);
  Point p = start;
  for (long i = 0; i < steps; ++i) {
    rec.points.push_back(p);
    double rt = return_time(p);
    rec.return_times.push_back(rt);
    rec.horocycle_length += rt;
    bool g = false;
    p = bcz_map(p, &g);
    if (g) ++rec.guarded_steps;
  }
  return rec;
}

ExactOrbitRecord orbit(const ExactPoint& start, long steps) {
  if (steps < 0) throw std::domain_error("orbit: steps must be >= 0");
  ExactOrbitRecord rec;
  rec.points.reserve(steps);
  rec.return_times.reserve(steps);
  rec.horocycle_length = 0;
  ExactPoint p = start;
  for (long i = 0; i < steps; ++i) {
    rec.points.push_back(p);
    Rat rt = return_time(p);
    rec.horocycle_length += rt;
    rec.return_times.push_back(std::move(rt));
    p = bcz_map(p);
  }
  return rec;
}

bool farey_orbit_equivalence(long Q) {
  if (Q < 2) throw std::domain_error("farey_orbit_equivalence: Q must be >= 2");
  ExactPoint seed{exact::make_rat(1, Q), Rat(1)};
  ExactPoint p = seed;
  bool ok = true;
  exact::for_each_gap(Q, [&](const Rat& gap) {
    if (!ok) return;
    if (return_time(p) != gap) ok = false;
    p = bcz_map(p);
  });
  return ok && p.a == seed.a && p.b == seed.b;
}

void write_orbit_csv(std::ostream& os, const OrbitRecord& rec) {
  os << "step,a,b,return_time\n";
  for (size_t i = 0; i < rec.points.size(); ++i) {
    os << i << ',' << csv::fmt(rec.points[i].a) << ',' << csv::fmt(rec.points[i].b)
       << ',' << csv::fmt(rec.return_times[i]) << '\n';
  }
}

void write_orbit_csv(std::ostream& os, const ExactOrbitRecord& rec) {
  os << "step,a_num,a_den,b_num,b_den,return_time_num,return_time_den\n";
  for (size_t i = 0; i < rec.points.size(); ++i) {
    const auto& p = rec.points[i];
    const auto& rt = rec.return_times[i];
    os << i << ',' << p.a.get_num().get_str() << ',' << p.a.get_den().get_str()
       << ',' << p.b.get_num().get_str() << ',' << p.b.get_den().get_str()
       << ',' << rt.get_num().get_str() << ',' << rt.get_den().get_str() << '\n';
  }
}

}  // namespace slopegap::bcz
