#include "slopegap/cli.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slopegap/bcz.hpp"
#include "slopegap/csv.hpp"
#include "slopegap/equidist.hpp"
#include "slopegap/farey.hpp"
#include "slopegap/hall.hpp"
#include "slopegap/sl2.hpp"
#include "slopegap/surface.hpp"

namespace slopegap::cli {

using nlohmann::json;

namespace {

struct GridSpec {
  double lo = 0, hi = 0;
  long count = 0;
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' ||
      !(g.lo < g.hi) || g.count < 2) {
    throw std::domain_error("bad grid spec (expected lo:hi:count): " + s);
  }
  return g;
}

std::vector<double> grid_points(const GridSpec& g) {
  std::vector<double> xs(g.count);
  for (long i = 0; i < g.count; ++i) {
    xs[i] = g.lo + (g.hi - g.lo) * static_cast<double>(i) / (g.count - 1);
  }
  return xs;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::domain_error("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return path_ == "-" ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

void write_csv_header(std::ostream& os, const RunConfig& cfg) {
  os << "# slopegap " << kVersion << "\n";
  os << "# seed=" << cfg.seed << " samples=" << cfg.samples << "\n";
  os << "# config: " << cfg.describe() << "\n";
}

json report_header(const RunConfig& cfg) {
  json j;
  j["version"] = kVersion;
  j["seed"] = cfg.seed;
  j["config"] = cfg.describe();
  return j;
}

void write_svg_polyline(std::ostream& os, const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::string& xlabel, const std::string& ylabel) {
  const int w = 800, h = 600, ml = 60, mr = 20, mt = 20, mb = 40;
  double xmin = xs.front(), xmax = xs.back();
  double ymin = ys.front(), ymax = ys.front();
  for (double y : ys) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (ymax == ymin) ymax = ymin + 1;
  auto X = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
  };
  auto Y = [&](double y) {
    return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
  };
  char buf[64];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
     << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", X(xs[i]), Y(ys[i]));
    os << buf;
  }
  os << "\"/>\n";
  std::snprintf(buf, sizeof buf, "%.6g", xmin);
  os << "<text x=\"" << ml << "\" y=\"" << h - 10 << "\" font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.6g", xmax);
  os << "<text x=\"" << w - mr - 40 << "\" y=\"" << h - 10 << "\" font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.6g", ymin);
  os << "<text x=\"4\" y=\"" << h - mb << "\" font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.6g", ymax);
  os << "<text x=\"4\" y=\"" << mt + 12 << "\" font-size=\"12\">" << buf << "</text>\n";
  os << "<text x=\"" << (w / 2 - 20) << "\" y=\"" << h - 8 << "\" font-size=\"12\">"
     << xlabel << "</text>\n";
  os << "<text x=\"8\" y=\"" << mt << "\" font-size=\"12\">" << ylabel << "</text>\n";
  os << "</svg>\n";
}

exact::Rat parse_rat(const std::string& s) {
  try {
    exact::Rat q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw std::domain_error("cannot parse rational: " + s);
  }
}

int run_farey(const RunConfig& cfg, Output& out) {
  if (cfg.Q < 1) throw std::domain_error("farey: --Q must be >= 1");
  if (cfg.format == "json") {
    json j = report_header(cfg);
    if (cfg.gaps) {
      auto gm = exact::renormalized_gaps(cfg.Q);
      json arr = json::array();
      for (const auto& g : gm.gaps) {
        arr.push_back({{"num", g.get_num().get_str()},
                       {"den", g.get_den().get_str()},
                       {"value", g.get_d()}});
      }
      j["gaps"] = std::move(arr);
    } else {
      auto fs = exact::farey_sequence(cfg.Q);
      json arr = json::array();
      for (const auto& t : fs.terms) {
        arr.push_back({{"num", t.get_num().get_str()},
                       {"den", t.get_den().get_str()}});
      }
      j["terms"] = std::move(arr);
    }
    out.os() << j.dump(2) << "\n";
    return 0;
  }
  write_csv_header(out.os(), cfg);
  if (cfg.gaps) {
    exact::write_gaps_csv(out.os(), exact::renormalized_gaps(cfg.Q));
  } else {
    exact::write_sequence_csv(out.os(), exact::farey_sequence(cfg.Q));
  }
  return 0;
}

int run_orbit(const RunConfig& cfg, Output& out) {
  if (cfg.steps < 0) throw std::domain_error("orbit: --steps must be >= 0");
  auto comma = cfg.start.find(',');
  if (comma == std::string::npos) {
    throw std::domain_error("orbit: --start must be a,b");
  }
  std::string sa = cfg.start.substr(0, comma), sb = cfg.start.substr(comma + 1);
  write_csv_header(out.os(), cfg);
  if (cfg.exact) {
    bcz::ExactPoint p{parse_rat(sa), parse_rat(sb)};
    auto rec = bcz::orbit(p, cfg.steps);
    bcz::write_orbit_csv(out.os(), rec);
  } else {
    bcz::Point p{std::stod(sa), std::stod(sb)};
    auto rec = bcz::orbit(p, cfg.steps);
    bcz::write_orbit_csv(out.os(), rec);
    out.os() << "# guarded_steps=" << rec.guarded_steps << "\n";
  }
  return 0;
}

int run_hall(const RunConfig& cfg, Output& out) {
  GridSpec g = parse_grid(cfg.grid.empty() ? "1:10:1000" : cfg.grid);
  auto xs = grid_points(g);
  std::vector<double> cdf(xs.size()), dens(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    cdf[i] = hall::hall_cdf(xs[i]);
    dens[i] = xs[i] > cfg.density_h ? hall::hall_density(xs[i], cfg.density_h) : 0.0;
  }
  if (cfg.format == "svg") {
    write_svg_polyline(out.os(), xs, cdf, "x", "cdf");
    return 0;
  }
  write_csv_header(out.os(), cfg);
  if (cfg.kinks) {
    auto kk = hall::detect_nonanalyticity(xs);
    out.os() << "# kinks:";
    for (double k : kk) out.os() << ' ' << csv::fmt(k);
    out.os() << "\n";
  }
  out.os() << "x,cdf,density\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    out.os() << csv::fmt(xs[i]) << ',' << csv::fmt(cdf[i]) << ','
             << csv::fmt(dens[i]) << '\n';
  }
  return 0;
}

surface::SurfaceSpec load_spec_or_throw(const RunConfig& cfg, json* report) {
  if (cfg.surface == "torus") {
    auto spec = surface::torus_spec();
    auto rep = surface::validate(spec);
    if (report) {
      (*report)["valid"] = rep.ok;
      (*report)["failures"] = rep.failures;
      (*report)["cusp_sliver_measure"] = rep.cusp_sliver_measure;
    }
    if (!rep.ok) throw std::domain_error("built-in torus spec failed validation");
    return spec;
  }
  auto res = surface::load_surface(cfg.surface);
  if (report) {
    (*report)["valid"] = res.report.ok;
    (*report)["failures"] = res.report.failures;
    (*report)["cusp_sliver_measure"] = res.report.cusp_sliver_measure;
  }
  if (!res.spec) {
    std::string msg = "surface spec invalid:";
    for (const auto& f : res.report.failures) msg += "\n  " + f;
    throw std::domain_error(msg);
  }
  return *res.spec;
}

int run_surface(const RunConfig& cfg, Output& out) {
  json rep;
  surface::SurfaceSpec spec;
  try {
    spec = load_spec_or_throw(cfg, &rep);
  } catch (const std::domain_error&) {
    if (cfg.format == "json") {
      json j = report_header(cfg);
      j["validation"] = rep;
      out.os() << j.dump(2) << "\n";
    }
    throw;
  }
  if (cfg.validate_only) {
    json j = report_header(cfg);
    j["validation"] = rep;
    j["min_return_time"] = surface::min_return_time(spec);
    out.os() << j.dump(2) << "\n";
    return 0;
  }
  GridSpec g = parse_grid(cfg.grid.empty() ? "1:10:1000" : cfg.grid);
  auto xs = grid_points(g);
  std::vector<double> cdf(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) cdf[i] = surface::surface_gap_cdf(spec, xs[i]);
  if (cfg.format == "json") {
    json j = report_header(cfg);
    j["validation"] = rep;
    j["min_return_time"] = surface::min_return_time(spec);
    j["x"] = xs;
    j["cdf"] = cdf;
    out.os() << j.dump(2) << "\n";
    return 0;
  }
  write_csv_header(out.os(), cfg);
  out.os() << "x,cdf\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    out.os() << csv::fmt(xs[i]) << ',' << csv::fmt(cdf[i]) << '\n';
  }
  return 0;
}

int run_count(const RunConfig& cfg, Output& out) {
  std::vector<long> Qs = cfg.Qs;
  if (Qs.empty() && cfg.Q >= 1) Qs.push_back(cfg.Q);
  if (Qs.empty()) throw std::domain_error("count: need --Q or --Qs");
  if (cfg.format == "json") {
    json j = report_header(cfg);
    json arr = json::array();
    for (long Q : Qs) {
      arr.push_back({{"Q", Q},
                     {"count", exact::farey_count(Q).get_str()},
                     {"deviation", Q >= 2 ? equidist::counting_deviation(Q) : 0.0}});
    }
    j["counts"] = std::move(arr);
    out.os() << j.dump(2) << "\n";
    return 0;
  }
  write_csv_header(out.os(), cfg);
  out.os() << "Q,count,deviation\n";
  for (long Q : Qs) {
    out.os() << Q << ',' << exact::farey_count(Q).get_str() << ','
             << csv::fmt(Q >= 2 ? equidist::counting_deviation(Q) : 0.0) << '\n';
  }
  return 0;
}

int run_equidist(const RunConfig& cfg, Output& out) {
  if (cfg.Qs.size() < 3) throw std::domain_error("equidist: need --Qs with >= 3 entries");
  auto quantity = equidist::quantity_from_name(cfg.quantity);

  // parallel over the Q grid, merged in Q order; single writer below
  int cap = sl2::thread_count();
  std::vector<double> errors(cfg.Qs.size());
  {
    std::vector<std::future<void>> fut;
    std::atomic<size_t> next{0};
    int nworkers = std::min<int>(cap, static_cast<int>(cfg.Qs.size()));
    for (int w = 0; w < nworkers; ++w) {
      fut.push_back(std::async(std::launch::async, [&]() {
        for (size_t i = next.fetch_add(1); i < cfg.Qs.size();
             i = next.fetch_add(1)) {
          switch (quantity) {
            case equidist::Quantity::kKs:
              errors[i] = equidist::ks_discrepancy(cfg.Qs[i]);
              break;
            case equidist::Quantity::kCounting:
              errors[i] = equidist::counting_deviation(cfg.Qs[i]);
              break;
            case equidist::Quantity::kRhoError:
              errors[i] = equidist::rho_error(cfg.Qs[i]);
              break;
          }
        }
      }));
    }
    for (auto& f : fut) f.get();
  }
  std::vector<double> lengths;
  for (long Q : cfg.Qs) lengths.push_back(static_cast<double>(Q) * Q);
  auto fit = equidist::fit_loglog(lengths, errors);

  double paper_bound = 0;
  switch (quantity) {
    case equidist::Quantity::kKs: paper_bound = -1.0 / 15.0; break;
    case equidist::Quantity::kCounting: paper_bound = -0.4; break;
    case equidist::Quantity::kRhoError: paper_bound = -1.0 / 30.0; break;
  }
  bool pass = fit.slope <= paper_bound;

  if (cfg.format == "svg") {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < lengths.size(); ++i) {
      if (errors[i] > 0) {
        lx.push_back(std::log(lengths[i]));
        ly.push_back(std::log(errors[i]));
      }
    }
    write_svg_polyline(out.os(), lx, ly, "log L", "log error");
    return 0;
  }
  if (cfg.format == "csv") {
    write_csv_header(out.os(), cfg);
    out.os() << "Q,L,error\n";
    for (size_t i = 0; i < cfg.Qs.size(); ++i) {
      out.os() << cfg.Qs[i] << ',' << csv::fmt(lengths[i]) << ','
               << csv::fmt(errors[i]) << '\n';
    }
    out.os() << "# slope=" << csv::fmt(fit.slope)
             << " intercept=" << csv::fmt(fit.intercept)
             << " r_squared=" << csv::fmt(fit.r_squared)
             << " paper_bound=" << csv::fmt(paper_bound)
             << " pass=" << (pass ? "true" : "false") << "\n";
    return 0;
  }
  json j = report_header(cfg);
  j["quantity"] = cfg.quantity;
  j["Qs"] = cfg.Qs;
  j["errors"] = errors;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["paper_bound"] = paper_bound;
  j["pass"] = pass;
  out.os() << j.dump(2) << "\n";
  return 0;
}

int run_sl2(const RunConfig& cfg, Output& out) {
  // UAK round-trip sweep
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long n = std::max<long>(1, cfg.samples);
  double worst = 0;
  for (long i = 0; i < n; ++i) {
    double u = unif(rng), v = unif(rng);
    if (u + v < 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    if (u <= 0 || v <= 0) continue;
    double mag = std::pow(10.0, -3.0 + 6.0 * unif(rng));
    double s = unif(rng) < 0.5 ? -mag : mag;
    sl2::SuspensionPoint p{u, v, s};
    auto c = sl2::uak_decompose(p);
    worst = std::max(worst,
                     sl2::uak_compose(c).frobenius_distance(sl2::suspension_matrix(p)));
  }
  sl2::SuspensionPoint wp{1.0, 0.0, 1.0};
  auto wc = sl2::uak_decompose(wp);
  double worked_err =
      sl2::uak_compose(wc).frobenius_distance(sl2::horocycle_unstable(1.0));

  // mu(f~) = m(f) for the interval indicator
  auto f = [](double a, double b) {
    double r = 1.0 / (a * b);
    return (r >= 1.0 && r <= 2.0) ? 1.0 : 0.0;
  };
  double target = hall::region_measure(hall::ReturnTimeRegion{1.0, 2.0});
  auto ft = sl2::thicken(f, 0.5, 1.0);
  auto mc = sl2::suspension_integral(ft, cfg.samples, cfg.seed);

  json j = report_header(cfg);
  j["uak"] = {{"samples", n},
              {"max_frobenius_error", worst},
              {"worked_point", {{"u", wc.u}, {"t", wc.t}, {"theta", wc.theta}}},
              {"worked_point_error", worked_err}};
  j["mu_identity"] = {{"test_function", "indicator R in [1,2], w=1/2"},
                      {"mc", mc.value},
                      {"std_error", mc.std_error},
                      {"target", target},
                      {"z", (mc.value - target) / mc.std_error},
                      {"truncation_warning", mc.truncation_warning}};
  out.os() << j.dump(2) << "\n";
  return 0;
}

void apply_config_file(std::vector<std::string>& args) {
  // --config file.json mirrors the flags; explicit args win (take_last)
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      std::ifstream in(args[i + 1]);
      if (!in) throw std::domain_error("cannot open config file: " + args[i + 1]);
      json j = json::parse(in);
      if (!j.is_object()) throw std::domain_error("config file must be a JSON object");
      std::vector<std::string> injected;
      for (auto it = j.begin(); it != j.end(); ++it) {
        injected.push_back("--" + it.key());
        if (it.value().is_string()) {
          injected.push_back(it.value().get<std::string>());
        } else if (it.value().is_boolean()) {
          if (!it.value().get<bool>()) injected.pop_back();
        } else {
          std::ostringstream ss;
          ss << it.value();
          injected.push_back(ss.str());
        }
      }
      args.erase(args.begin() + i, args.begin() + i + 2);
      args.insert(args.begin() + i, injected.begin(), injected.end());
      return;
    }
  }
}

}  // namespace

std::string RunConfig::describe() const {
  std::ostringstream ss;
  ss << "command=" << command;
  if (Q > 0) ss << " Q=" << Q;
  if (!Qs.empty()) {
    ss << " Qs=";
    for (size_t i = 0; i < Qs.size(); ++i) ss << (i ? "," : "") << Qs[i];
  }
  ss << " surface=" << surface;
  if (has_interval) ss << " interval=" << interval_a << ":" << interval_b;
  if (!grid.empty()) ss << " grid=" << grid;
  if (!start.empty()) ss << " start=" << start << " steps=" << steps
                         << " exact=" << (exact ? 1 : 0);
  if (gaps) ss << " gaps=1";
  if (kinks) ss << " kinks=1";
  if (validate_only) ss << " validate=1";
  if (command == "equidist") ss << " quantity=" << quantity;
  ss << " format=" << format << " seed=" << seed << " samples=" << samples;
  return ss.str();
}

int run(const std::vector<std::string>& args_in) {
  RunConfig cfg;
  CLI::App app{"slope-gap distributions of lattice surfaces via the transversal first-return map"};
  app.set_version_flag("--version", std::string("slopegap ") + kVersion);
  app.require_subcommand(1);

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--output", cfg.output, "output path or - for stdout")->take_last();
    sub->add_option("--format", cfg.format, "csv|json|svg")->take_last();
    sub->add_option("--seed", cfg.seed, "RNG seed")->take_last();
    sub->add_option("--samples", cfg.samples, "Monte Carlo sample count")->take_last();
  };

  auto* farey = app.add_subcommand("farey", "Farey sequence / renormalized gap dump");
  farey->add_option("--Q", cfg.Q, "Farey order")->required()->take_last();
  farey->add_flag("--gaps", cfg.gaps, "dump renormalized gaps instead of terms");
  add_common(farey);

  auto* orbit = app.add_subcommand("orbit", "BCZ orbit dump");
  orbit->add_option("--start", cfg.start, "start point a,b (rationals in exact mode)")
      ->required()
      ->take_last();
  orbit->add_option("--steps", cfg.steps, "number of steps")->required()->take_last();
  orbit->add_flag("--exact", cfg.exact, "exact rational orbit");
  add_common(orbit);

  auto* hallc = app.add_subcommand("hall", "Hall distribution cdf/density table");
  hallc->add_option("--grid", cfg.grid, "x grid lo:hi:count")->take_last();
  hallc->add_flag("--kinks", cfg.kinks, "report non-analyticity candidates");
  hallc->add_option("--density-h", cfg.density_h, "central difference step")->take_last();
  add_common(hallc);

  auto* surf = app.add_subcommand("surface", "surface spec validation and gap cdf");
  surf->add_option("--spec", cfg.surface, "path to surface JSON or 'torus'")->take_last();
  surf->add_flag("--validate", cfg.validate_only, "validate only");
  surf->add_option("--grid", cfg.grid, "x grid lo:hi:count")->take_last();
  add_common(surf);

  auto* count = app.add_subcommand("count", "Farey counts and counting deviations");
  count->add_option("--Q", cfg.Q, "single order")->take_last();
  count->add_option("--Qs", cfg.Qs, "comma-separated orders")->delimiter(',')->take_last();
  add_common(count);

  auto* eq = app.add_subcommand("equidist", "equidistribution error decay experiments");
  eq->add_option("--quantity", cfg.quantity, "ks|counting|rho_error")->take_last();
  eq->add_option("--Qs", cfg.Qs, "comma-separated orders")->delimiter(',')->take_last();
  add_common(eq);

  auto* sl2c = app.add_subcommand("sl2", "UAK round-trip and measure identity report");
  add_common(sl2c);

  std::vector<std::string> args = args_in;
  try {
    apply_config_file(args);
    std::vector<const char*> argv;
    argv.push_back("slopegap");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (farey->parsed()) cfg.command = "farey";
    if (orbit->parsed()) cfg.command = "orbit";
    if (hallc->parsed()) cfg.command = "hall";
    if (surf->parsed()) cfg.command = "surface";
    if (count->parsed()) cfg.command = "count";
    if (eq->parsed()) cfg.command = "equidist";
    if (sl2c->parsed()) cfg.command = "sl2";

    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "svg") {
      throw std::domain_error("unknown format: " + cfg.format);
    }
    if (cfg.command == "sl2") cfg.format = "json";  // only report shape it has
    Output out(cfg.output);
    if (cfg.command == "farey") return run_farey(cfg, out);
    if (cfg.command == "orbit") return run_orbit(cfg, out);
    if (cfg.command == "hall") return run_hall(cfg, out);
    if (cfg.command == "surface") return run_surface(cfg, out);
    if (cfg.command == "count") return run_count(cfg, out);
    if (cfg.command == "equidist") return run_equidist(cfg, out);
    if (cfg.command == "sl2") return run_sl2(cfg, out);
    throw std::logic_error("no command dispatched");
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace slopegap::cli
