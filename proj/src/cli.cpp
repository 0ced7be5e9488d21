#include "hookwalk/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "hookwalk/diagram_io.hpp"
#include "hookwalk/inverse.hpp"
#include "hookwalk/moments.hpp"
#include "hookwalk/polyroots.hpp"
#include "hookwalk/transition.hpp"
#include "hookwalk/walk.hpp"

namespace hookwalk::cli {

namespace {

using ojson = nlohmann::ordered_json;

class IdentityFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw InvalidInput(std::string(what) + " must be two numbers 'u,v'");
  auto num = [&](const std::string& t) {
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
      throw InvalidInput(std::string(what) + ": '" + t + "' is not a number");
    return v;
  };
  return {num(s.substr(0, comma)), num(s.substr(comma + 1))};
}

// Writes to a file, or to `fallback` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InvalidInput("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void write_json(std::ostream& os, const ojson& j) { os << j.dump() << '\n'; }

ojson number_or_null(double v) {
  return std::isfinite(v) ? json_number(v) : ojson(nullptr);
}

// ---------------------------------------------------------------------------

struct DensityOpts {
  std::string diagram;
  std::string walk = "exterior";
  int grid = 512;
  bool unrotated = false;
};

void cmd_density(const DensityOpts& o, std::ostream& out) {
  const DiagramSpec spec = read_diagram_spec(o.diagram);
  const WalkKind kind = parse_walk_kind(o.walk);
  if (o.grid < 2) throw InvalidInput("--grid must be at least 2");
  if (std::holds_alternative<RectangularDiagram>(spec))
    throw InvalidInput("rectangular diagrams have atomic measures; use atoms");
  out << "# kind=" << to_string(kind) << '\n';
  if (o.unrotated) {
    const auto f = to_unrotated(spec);
    if (!f) throw InvalidInput("--unrotated needs an unrotated_poly diagram");
    const auto rho = kind == WalkKind::exterior ? UnrotatedDensity::exterior(*f)
                                                : UnrotatedDensity::interior(*f);
    const Interval I = rho.support();
    const DensityPiece p = rho.piece();
    out << "# coordinates=unrotated\n"
        << "# interval=" << format_real(I.a) << ',' << format_real(I.b) << '\n'
        << "# left_exponent=" << format_real(p.left_exponent) << '\n'
        << "# right_exponent=" << format_real(p.right_exponent) << '\n'
        << "x,density\n";
    for (double x : uniform_grid(I, o.grid))
      out << format_real(x) << ',' << format_real(rho(x)) << '\n';
    return;
  }
  const TransitionDensity rho(to_diagram(spec), kind);
  const DensityGrid g = sample_density(rho, graded_grid(rho, o.grid));
  out << "# coordinates=rotated\n"
      << "# interval=" << format_real(g.interval.a) << ','
      << format_real(g.interval.b) << '\n'
      << "# left_exponent=" << format_real(g.left_exponent) << '\n'
      << "# right_exponent=" << format_real(g.right_exponent) << '\n'
      << "x,density\n";
  for (std::size_t i = 0; i < g.grid.size(); ++i)
    out << format_real(g.grid[i]) << ',' << format_real(g.values[i]) << '\n';
}

// ---------------------------------------------------------------------------

struct AtomsOpts {
  std::string diagram;
  std::string walk = "exterior";
};

void cmd_atoms(const AtomsOpts& o, std::ostream& out) {
  const DiagramSpec spec = read_diagram_spec(o.diagram);
  const auto* r = std::get_if<RectangularDiagram>(&spec);
  if (!r) throw InvalidInput("atoms needs a rectangular diagram");
  const WalkKind kind = parse_walk_kind(o.walk);
  const AtomicMeasure m =
      kind == WalkKind::exterior ? exterior_atoms(*r) : interior_atoms(*r);
  ojson j = ojson::object();
  for (std::size_t i = 0; i < m.size(); ++i)
    j[shortest(m.locations[i])] = json_number(m.weights[i]);
  write_json(out, j);
}

// ---------------------------------------------------------------------------

struct InvertOpts {
  std::string density;
  std::string walk = "exterior";
  std::optional<double> area;
  std::optional<double> center;
  std::string interval;
  std::string out_path;
};

DensityGrid read_density_csv(const std::string& path, WalkKind kind,
                             const std::string& interval_flag) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open density file " + path);
  DensityGrid g;
  g.kind = kind;
  std::map<std::string, std::string> meta;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        meta[key] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header) {
      header = true;
      if (line.rfind("x,", 0) == 0) continue;
    }
    const auto [x, v] = parse_pair(line, ("line " + std::to_string(line_no)).c_str());
    g.grid.push_back(x);
    g.values.push_back(v);
  }
  if (meta.count("coordinates") && meta["coordinates"] != "rotated")
    throw InvalidInput("only rotated-coordinate densities can be inverted");
  if (meta.count("kind") && parse_walk_kind(meta["kind"]) != kind)
    throw InvalidInput("density file holds a " + meta["kind"] +
                       " density but --walk is " + to_string(kind));
  std::string iv = interval_flag.empty() ? meta["interval"] : interval_flag;
  if (iv.empty()) throw InvalidInput("density interval unknown; pass --interval a,b");
  const auto [a, b] = parse_pair(iv, "interval");
  g.interval = {a, b};
  auto exponent = [&](const char* key) {
    if (!meta.count(key)) return 0.0;
    return parse_pair(meta[key] + ",0", key).first;
  };
  g.left_exponent = exponent("left_exponent");
  g.right_exponent = exponent("right_exponent");
  g.validate();
  return g;
}

void cmd_invert(const InvertOpts& o, std::ostream& out) {
  const WalkKind kind = parse_walk_kind(o.walk);
  std::optional<InteriorInverseParams> params;
  if (kind == WalkKind::interior) {
    if (!o.area || !o.center)
      throw InvalidInput("invert --walk interior needs --area and --center");
    params = InteriorInverseParams{*o.area, *o.center};
    params->validate();
  }
  const DensityGrid g = read_density_csv(o.density, kind, o.interval);
  const SlopeFunction s = params ? recover_slopes(g, *params) : recover_slopes(g);
  const DiagramSpec spec = diagram_from_slopes(s);
  Sink sink(o.out_path, out);
  write_json(*sink, to_json(spec));
}

// ---------------------------------------------------------------------------

struct WalkOpts {
  std::string diagram;
  std::string walk = "exterior";
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::string start;
  double epsilon = 1e-9;
  int max_steps = 10000;
  int threads = 0;
  std::string csv = "-";
  std::string summary;
};

void cmd_walk(const WalkOpts& o, std::ostream& out, std::ostream& err) {
  const DiagramSpec spec = read_diagram_spec(o.diagram);
  const WalkKind kind = parse_walk_kind(o.walk);
  if (o.samples < 1) throw InvalidInput("--samples must be at least 1");
  WalkConfig cfg{o.epsilon, o.max_steps, o.seed};
  cfg.validate();

  Simulation sim;
  std::function<double(double)> analytic;
  std::string analytic_name = "none";
  ojson atoms = nullptr;
  std::optional<EmpiricalCDF> ks_sample;
  if (!o.start.empty()) {
    const auto f = to_unrotated(spec);
    if (!f) throw InvalidInput("--start needs an unrotated_poly diagram");
    if (kind != WalkKind::interior) throw InvalidInput("--start needs --walk interior");
    const auto [s, t] = parse_pair(o.start, "--start");
    // Validates the start before sampling.
    interior_walk_from(*f, s, t, cfg, 0);
    sim = simulate([&](std::uint64_t i) { return interior_walk_from(*f, s, t, cfg, i); },
                   o.samples, o.threads);
    if (t < f->evaluate(s)) {
      const auto g = UnrotatedDensity::started(*f, s, t);
      analytic = tabulate_cdf([&](double x) { return g.cdf(x); }, g.support(), 400);
      analytic_name = "started_density";
    }
  } else {
    const Diagram d = to_diagram(spec);
    sim = simulate(d, kind, o.samples, cfg, o.threads);
    if (const auto* r = std::get_if<RectangularDiagram>(&d)) {
      if (!(kind == WalkKind::interior && r->is_trivial())) {
        const AtomicMeasure m =
            kind == WalkKind::exterior ? exterior_atoms(*r) : interior_atoms(*r);
        analytic = [m](double x) { return m.cdf(x); };
        analytic_name = "atoms";
        const EmpiricalCDF e = sim.cdf();
        // Limits land within stop_epsilon of an atom; KS compares the
        // nearest atoms.
        std::vector<double> nearest;
        nearest.reserve(sim.samples.size());
        for (const auto& s : sim.samples) {
          auto it = std::lower_bound(m.locations.begin(), m.locations.end(), s.limit_x);
          if (it == m.locations.end() ||
              (it != m.locations.begin() && s.limit_x - *(it - 1) < *it - s.limit_x))
            --it;
          nearest.push_back(*it);
        }
        ks_sample = EmpiricalCDF(std::move(nearest));
        atoms = ojson::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
          const double f = e.fraction_in(m.locations[i] - cfg.stop_epsilon,
                                         m.locations[i] + cfg.stop_epsilon);
          atoms.push_back({{"x", json_number(m.locations[i])},
                           {"weight", json_number(m.weights[i])},
                           {"frequency", json_number(f)}});
        }
      }
    } else {
      const TransitionDensity rho(d, kind);
      analytic = tabulate_cdf([&](double x) { return rho.cdf(x); }, rho.interval(), 400);
      analytic_name = "density";
    }
  }

  {
    Sink csv(o.csv, out);
    *csv << "index,limit_x,steps,truncated\n";
    for (std::size_t i = 0; i < sim.samples.size(); ++i) {
      const auto& s = sim.samples[i];
      *csv << i << ',' << format_real(s.limit_x) << ',' << s.steps_taken << ','
           << (s.truncated ? 1 : 0) << '\n';
    }
  }
  double steps = 0.0;
  for (const auto& s : sim.samples) steps += s.steps_taken;
  ojson summary;
  summary["walk"] = to_string(kind);
  summary["samples"] = o.samples;
  summary["seed"] = o.seed;
  summary["stop_epsilon"] = json_number(cfg.stop_epsilon);
  summary["max_steps"] = cfg.max_steps;
  summary["truncated"] = sim.truncated;
  summary["mean_steps"] = json_number(steps / static_cast<double>(o.samples));
  summary["analytic"] = analytic_name;
  summary["ks"] = analytic ? number_or_null(ks_distance(
                                 ks_sample ? *ks_sample : sim.cdf(), analytic))
                           : ojson(nullptr);
  if (!atoms.is_null()) summary["atoms"] = atoms;
  const bool csv_on_stdout = o.csv.empty() || o.csv == "-";
  Sink sum(o.summary, csv_on_stdout ? err : out);
  write_json(*sum, summary);
}

// ---------------------------------------------------------------------------

struct MomentsOpts {
  std::string diagram;
  int max_order = 8;
};

void cmd_moments(const MomentsOpts& o, std::ostream& out) {
  const DiagramSpec spec = read_diagram_spec(o.diagram);
  const Diagram d = to_diagram(spec);
  const MomentVector p = p_moments(d, o.max_order);
  const double A = area(d);
  ojson j;
  j["center"] = json_number(center(d));
  j["area"] = json_number(A);
  j["p"] = json_numbers(p.values);
  j["h"] = json_numbers(h_from_p(p).values);
  j["g"] = A > 0.0 && o.max_order >= 2 ? json_numbers(g_from_p(p, A).values)
                                       : ojson(nullptr);
  write_json(out, j);
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::string diagram;
  std::string identity = "pi";
  double tol = 1e-6;
  std::optional<double> x;
  std::string start;
};

void cmd_verify(const VerifyOpts& o, std::ostream& out) {
  const DiagramSpec spec = read_diagram_spec(o.diagram);
  if (!(o.tol > 0.0)) throw InvalidInput("--tol must be positive");
  ojson checks = ojson::array();
  double worst = 0.0;
  auto add = [&](const std::string& name, double lhs, double rhs, double residual) {
    checks.push_back({{"name", name},
                      {"lhs", number_or_null(lhs)},
                      {"rhs", number_or_null(rhs)},
                      {"residual", number_or_null(residual)}});
    worst = std::isfinite(residual) ? std::max(worst, residual)
                                    : std::numeric_limits<double>::infinity();
  };
  const std::string& id = o.identity;
  if (id == "pi" || id == "area") {
    const Diagram d = to_diagram(spec);
    const WalkKind kind = id == "pi" ? WalkKind::exterior : WalkKind::interior;
    double mass;
    if (const auto* r = std::get_if<RectangularDiagram>(&d)) {
      const AtomicMeasure m =
          kind == WalkKind::exterior ? exterior_atoms(*r) : interior_atoms(*r);
      numerics::CompensatedSum s;
      for (double w : m.weights) s.add(w);
      mass = s.value();
    } else {
      mass = TransitionDensity(d, kind).mass();
    }
    if (id == "pi") {
      add("exterior mass", mass, 1.0, std::abs(mass - 1.0));
    } else {
      const double A = area(d);
      add("area", A, A * mass, std::abs(mass - 1.0));
    }
  } else if (id == "cauchy") {
    const Diagram d = to_diagram(spec);
    const double x = o.x.value_or(std::max(interval(d).b, 0.0) + 1.0);
    for (auto kind : {WalkKind::exterior, WalkKind::interior}) {
      if (const auto* r = std::get_if<RectangularDiagram>(&d);
          r && r->is_trivial() && kind == WalkKind::interior)
        continue;
      const IdentitySides s = cauchy_identity(d, x, kind);
      add(std::string(to_string(kind)) + " cauchy", s.lhs, s.rhs, s.residual());
    }
  } else if (id == "thm9" || id == "thm10") {
    const auto f = to_unrotated(spec);
    if (!f) throw InvalidInput("--identity " + id + " needs an unrotated_poly diagram");
    const Interval I = f->interval();
    if (id == "thm9") {
      double s = I.b, t = 0.0;
      if (!o.start.empty()) std::tie(s, t) = parse_pair(o.start, "--start");
      const double x = o.x.value_or(0.5 * (f->inverse(t) + s));
      const IdentitySides r = started_self_consistency(*f, s, t, x);
      add("started self-consistency", r.lhs, r.rhs, r.residual());
    } else {
      const double x = o.x.value_or(0.5 * (I.a + I.b));
      const IdentitySides r = started_mixture(*f, x);
      add("started mixture", r.lhs, r.rhs, r.residual());
    }
  } else {
    throw InvalidInput("unknown identity '" + id + "'");
  }
  const bool pass = worst <= o.tol;
  ojson j;
  j["identity"] = id;
  j["tolerance"] = json_number(o.tol);
  j["checks"] = checks;
  j["max_residual"] = number_or_null(worst);
  j["pass"] = pass;
  write_json(out, j);
  if (!pass) throw IdentityFailure("identity residual exceeds tolerance");
}

// ---------------------------------------------------------------------------

struct RootsOpts {
  int n = 30;
  int threads = 0;
};

void cmd_roots(const RootsOpts& o, std::ostream& out) {
  const RootProfile r = derivative_root_fractional_parts(o.n, o.threads);
  out << "k,lambda,limit_curve\n";
  for (int k = 0; k < r.n; ++k)
    out << k << ',' << format_real(r.lambdas[k]) << ','
        << format_real(limit_curve((k + 0.5) / r.n)) << '\n';
}

// ---------------------------------------------------------------------------

struct ConvertOpts {
  std::string diagram;
  std::string to = "canonical";
  int segments = 0;
  int n = 0;
  std::string out_path;
};

void cmd_convert(const ConvertOpts& o, std::ostream& out) {
  const DiagramSpec spec = read_diagram_spec(o.diagram);
  DiagramSpec result = spec;
  auto interpolant = [&]() -> PiecewiseLinearDiagram {
    if (const auto* p = std::get_if<PiecewiseLinearDiagram>(&spec))
      if (o.segments == 0) return *p;
    if (o.segments < 1) throw InvalidInput("--segments must be at least 1");
    return piecewise_linear_interpolant(to_diagram(spec), o.segments);
  };
  if (o.to == "piecewise_linear") {
    result = interpolant();
  } else if (o.to == "rectangular") {
    if (o.n < 1) throw InvalidInput("--to rectangular needs --n >= 1");
    result = rectangular_approximation(interpolant(), o.n);
  } else if (o.to != "canonical") {
    throw InvalidInput("unknown target '" + o.to + "'");
  }
  Sink sink(o.out_path, out);
  write_json(*sink, to_json(result));
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Transition measures of continual Young diagrams and their hook walks"};
  app.name("hookwalk");
  app.require_subcommand(1);
  const std::vector<std::string> walks{"exterior", "interior"};

  DensityOpts dens;
  auto* density = app.add_subcommand(
      "density", "Transition density on a grid. CSV: '# key=value' metadata "
                 "(kind, coordinates, interval, left_exponent, right_exponent), "
                 "then columns x,density");
  density->add_option("--diagram", dens.diagram, "Diagram spec JSON")->required();
  density->add_option("--walk", dens.walk)->check(CLI::IsMember(walks));
  density->add_option("--grid", dens.grid, "Number of grid points");
  density->add_flag("--unrotated", dens.unrotated,
                    "Density in unrotated coordinates (unrotated_poly only)");

  AtomsOpts at;
  auto* atoms = app.add_subcommand(
      "atoms", "Atoms of a rectangular diagram as JSON {location: weight}");
  atoms->add_option("--diagram", at.diagram)->required();
  atoms->add_option("--walk", at.walk)->check(CLI::IsMember(walks));

  InvertOpts inv;
  auto* invert = app.add_subcommand(
      "invert", "Recover a piecewise-linear diagram from a density CSV");
  invert->add_option("--density", inv.density, "CSV as written by density")->required();
  invert->add_option("--walk", inv.walk)->check(CLI::IsMember(walks));
  invert->add_option("--area", inv.area, "Area A (interior walk)");
  invert->add_option("--center", inv.center, "Center z (interior walk)");
  invert->add_option("--interval", inv.interval, "a,b if the CSV has no metadata");
  invert->add_option("--out", inv.out_path, "Output diagram spec (default stdout)");

  WalkOpts wk;
  auto* walk = app.add_subcommand(
      "walk", "Monte Carlo hook walks. CSV columns index,limit_x,steps,truncated; "
              "JSON summary with the KS distance to the analytic law");
  walk->add_option("--diagram", wk.diagram)->required();
  walk->add_option("--walk", wk.walk)->check(CLI::IsMember(walks));
  walk->add_option("--samples", wk.samples)->check(CLI::PositiveNumber);
  walk->add_option("--seed", wk.seed);
  walk->add_option("--start", wk.start, "s,t: unrotated interior walk from (s, t)");
  walk->add_option("--epsilon", wk.epsilon, "Stop distance");
  walk->add_option("--max-steps", wk.max_steps);
  walk->add_option("--threads", wk.threads, "Worker cap (0: HOOKWALK_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  walk->add_option("--csv", wk.csv, "Samples CSV path ('-' stdout)");
  walk->add_option("--summary", wk.summary,
                   "Summary JSON path (default stderr when the CSV is on stdout, "
                   "else stdout)");

  MomentsOpts mo;
  auto* moments = app.add_subcommand("moments", "JSON p, h and g moment vectors");
  moments->add_option("--diagram", mo.diagram)->required();
  moments->add_option("--max-order", mo.max_order);

  VerifyOpts ve;
  auto* verify = app.add_subcommand(
      "verify", "Check an identity; JSON report, exit 2 if a residual exceeds --tol");
  verify->add_option("--diagram", ve.diagram)->required();
  verify->add_option("--identity", ve.identity)
      ->check(CLI::IsMember({"pi", "area", "cauchy", "thm9", "thm10"}));
  verify->add_option("--tol", ve.tol);
  verify->add_option("--x", ve.x, "Evaluation point");
  verify->add_option("--start", ve.start, "s,t for thm9 (default b,0)");

  RootsOpts ro;
  auto* roots = app.add_subcommand(
      "roots", "Fractional parts of the roots of p_n'. CSV k,lambda,limit_curve "
               "with the curve at (k + 1/2)/n");
  roots->add_option("--n", ro.n)->required();
  roots->add_option("--threads", ro.threads)->check(CLI::NonNegativeNumber);

  ConvertOpts co;
  auto* convert = app.add_subcommand(
      "convert", "Re-emit a diagram spec: canonical, piecewise_linear "
                 "(--segments N interpolant) or rectangular (--n N approximant)");
  convert->add_option("--diagram", co.diagram)->required();
  convert->add_option("--to", co.to)
      ->check(CLI::IsMember({"canonical", "piecewise_linear", "rectangular"}));
  convert->add_option("--segments", co.segments);
  convert->add_option("--n", co.n);
  convert->add_option("--out", co.out_path);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (density->parsed()) cmd_density(dens, out);
    else if (atoms->parsed()) cmd_atoms(at, out);
    else if (invert->parsed()) cmd_invert(inv, out);
    else if (walk->parsed()) cmd_walk(wk, out, err);
    else if (moments->parsed()) cmd_moments(mo, out);
    else if (verify->parsed()) cmd_verify(ve, out);
    else if (roots->parsed()) cmd_roots(ro, out);
    else if (convert->parsed()) cmd_convert(co, out);
  } catch (const IdentityFailure& e) {
    err << "hookwalk: " << e.what() << '\n';
    return kIdentityFailed;
  } catch (const ConvergenceError& e) {
    err << "hookwalk: " << e.what() << " (last estimates " << format_real(e.previous_estimate())
        << ", " << format_real(e.last_estimate()) << ")\n";
    return kNoConvergence;
  } catch (const std::exception& e) {
    err << "hookwalk: " << e.what() << '\n';
    return kInvalidInput;
  }
  out.flush();
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace hookwalk::cli
