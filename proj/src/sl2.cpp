#include "slopegap/sl2.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "slopegap/bcz.hpp"

namespace slopegap::sl2 {

double Mat2::frobenius_distance(const Mat2& o) const {
  double d00 = m00 - o.m00, d01 = m01 - o.m01, d10 = m10 - o.m10,
         d11 = m11 - o.m11;
  return std::sqrt(d00 * d00 + d01 * d01 + d10 * d10 + d11 * d11);
}

Mat2 geodesic(double t) {
  double e = std::exp(0.5 * t);
  return Mat2{e, 0, 0, 1.0 / e};
}

Mat2 horocycle_unstable(double s) { return Mat2{1, 0, -s, 1}; }

Mat2 horocycle_stable(double s) { return Mat2{1, s, 0, 1}; }

Mat2 upper_triangular(double a, double b) {
  if (a == 0.0) throw std::domain_error("upper_triangular: a must be nonzero");
  return Mat2{a, b, 0, 1.0 / a};
}

Mat2 rotation(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return Mat2{c, s, -s, c};
}

Mat2 suspension_matrix(const SuspensionPoint& p) {
  return upper_triangular(p.a, p.b) * horocycle_unstable(p.s);
}

UAKCoordinates uak_decompose(const SuspensionPoint& p) {
  if (p.a <= 0) throw std::domain_error("uak_decompose: a must be > 0");
  if (p.s == 0.0) {
    throw std::domain_error("uak_decompose: theta coordinate singular at s = 0");
  }
  // p_{a,b} h_s has bottom row (-s/a, 1/a) = (-e^{-t/2} sin(theta),
  // e^{-t/2} cos(theta)); cos(theta) > 0 since a > 0, so theta = arctan(s)
  // on (-pi/2, pi/2) and e^{-t} = (1 + s^2)/a^2. The top row then gives
  // u = ab - a^2 s / (1 + s^2).
  UAKCoordinates c;
  c.theta = std::atan(p.s);
  c.t = 2.0 * std::log(p.a) - std::log1p(p.s * p.s);
  c.u = p.a * p.b - p.a * p.a * p.s / (1.0 + p.s * p.s);
  return c;
}

Mat2 uak_compose(const UAKCoordinates& c) {
  return horocycle_stable(c.u) * geodesic(c.t) * rotation(c.theta);
}

SuspensionFn thicken(TestFn f, double w, double min_return_time, double cm,
                     double cmu) {
  if (!(w > 0)) throw std::domain_error("thicken: width must be > 0");
  if (w >= min_return_time) {
    throw std::domain_error("thicken: width must be below the minimum return time");
  }
  double factor = cm / (cmu * w);
  return [f = std::move(f), w, factor](double a, double b, double s) {
    if (s < 0 || s > w) return 0.0;
    if (!bcz::in_transversal(a, b)) return 0.0;
    return factor * f(a, b);
  };
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SLOPEGAP_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ChunkSums {
  double sum = 0, sumsq = 0;
  bool warn = false;
};

}  // namespace

McResult suspension_integral(const SuspensionFn& g, long samples,
                             std::uint64_t seed, double r_max, int threads) {
  if (samples < 1) throw std::domain_error("suspension_integral: samples must be >= 1");
  if (!(r_max > 1)) throw std::domain_error("suspension_integral: r_max must be > 1");
  const int nthreads = thread_count(threads);
  const double kTriangleArea = 0.5;

  std::vector<ChunkSums> sums(nthreads);
  auto worker = [&](int tid, long begin, long end) {
    std::mt19937_64 rng(splitmix64(seed ^ (0xc2b2ae3d27d4eb4fULL * (tid + 1))));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ChunkSums& out = sums[tid];
    for (long i = begin; i < end; ++i) {
      double u = unif(rng), v = unif(rng);
      if (u + v < 1.0) {  // fold the unit square onto {a + b > 1}
        u = 1.0 - u;
        v = 1.0 - v;
      }
      if (u <= 0 || v <= 0 || u + v <= 1.0) {  // measure-zero edge draws
        continue;
      }
      double r = 1.0 / (u * v);
      double s = unif(rng) * r;
      double val = g(u, v, s);
      if (r > r_max && val != 0.0) out.warn = true;
      double x = kTorusCmu * kTriangleArea * std::min(r, r_max) * val;
      out.sum += x;
      out.sumsq += x * x;
    }
  };

  if (nthreads == 1) {
    worker(0, 0, samples);
  } else {
    std::vector<std::thread> pool;
    long chunk = samples / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      long begin = t * chunk;
      long end = (t == nthreads - 1) ? samples : begin + chunk;
      pool.emplace_back(worker, t, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0, sumsq = 0;
  bool warn = false;
  for (const auto& s : sums) {  // fixed combine order keeps results bitwise stable
    sum += s.sum;
    sumsq += s.sumsq;
    warn = warn || s.warn;
  }
  McResult res;
  res.samples = samples;
  res.seed = seed;
  res.value = sum / samples;
  double var = (sumsq - sum * sum / samples) / (samples - 1.0);
  res.std_error = std::sqrt(std::max(0.0, var) / samples);
  res.truncation_warning = warn;
  return res;
}

}  // namespace slopegap::sl2
