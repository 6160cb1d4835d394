// itecount: batch driver for transmission-eigenvalue counting runs.
//
// Exit codes: 0 ok, 1 usage/config/io, 2 discreteness not guaranteed (or the
// boundary-contrast hypothesis fails), 3 gamma = 0, 4 a checked bound or
// comparison failed, 5 numeric failure. Failures print one line
//   itecount: reason=<Kind> exit=<code> message=<text>
// on stderr.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ite/media.hpp"
#include "ite/planar.hpp"
#include "ite/radial.hpp"
#include "ite/report.hpp"
#include "ite/spectra.hpp"

using nlohmann::json;
using namespace ite;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNotDiscrete = 2, kGammaZero = 3, kBoundFailed = 4, kNumeric = 5 };

struct Exit {
  int code;
  std::string kind, message;
};

[[noreturn]] void fail(int code, const std::string& kind, const std::string& message) {
  throw Exit{code, kind, message};
}

struct Settings {
  double lambda_max = 0.0;  // 0: verb default
  int points_per_decade = 64;
  int threads = 1;
  double lambda_tol = 1e-9;
  double touch_tol = 1e-7;
  double pole_offset = 1e-6;
  int extra_modes = 0;
  double epsilon = 0.1;
  bool strict = true;
  std::string backend = "auto";
  int coarse_steps = 120;
  int nodes = 0;
  double estimate_lo = 10.0;
  int estimate_modes = 200;
  int estimate_ppd = 16;
  int near_poles = 24;
  double near_distance = 1e-2;
  double cross_tol = 1e-5;

  json to_json() const {
    return {{"lambda_max", lambda_max},   {"points_per_decade", points_per_decade},
            {"threads", threads},         {"lambda_tol", lambda_tol},
            {"touch_tol", touch_tol},     {"pole_offset", pole_offset},
            {"extra_modes", extra_modes}, {"epsilon", epsilon},
            {"strict", strict},           {"backend", backend},
            {"coarse_steps", coarse_steps}, {"nodes", nodes},
            {"estimate_lo", estimate_lo}, {"estimate_modes", estimate_modes},
            {"estimate_ppd", estimate_ppd}, {"near_poles", near_poles},
            {"near_distance", near_distance}, {"cross_tol", cross_tol}};
  }

  // Keys of the medium's "run" block, by the same names as to_json().
  void apply(const json& run) {
    for (auto it = run.begin(); it != run.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      try {
        if (k == "lambda_max") lambda_max = v.get<double>();
        else if (k == "points_per_decade") points_per_decade = v.get<int>();
        else if (k == "threads") threads = v.get<int>();
        else if (k == "lambda_tol") lambda_tol = v.get<double>();
        else if (k == "touch_tol") touch_tol = v.get<double>();
        else if (k == "pole_offset") pole_offset = v.get<double>();
        else if (k == "extra_modes") extra_modes = v.get<int>();
        else if (k == "epsilon") epsilon = v.get<double>();
        else if (k == "strict") strict = v.get<bool>();
        else if (k == "backend") backend = v.get<std::string>();
        else if (k == "coarse_steps") coarse_steps = v.get<int>();
        else if (k == "nodes") nodes = v.get<int>();
        else if (k == "estimate_lo") estimate_lo = v.get<double>();
        else if (k == "estimate_modes") estimate_modes = v.get<int>();
        else if (k == "estimate_ppd") estimate_ppd = v.get<int>();
        else if (k == "near_poles") near_poles = v.get<int>();
        else if (k == "near_distance") near_distance = v.get<double>();
        else if (k == "cross_tol") cross_tol = v.get<double>();
        else throw ConfigError("unknown key in 'run': " + k);
      } catch (const json::exception& e) {
        throw ConfigError("bad value for run." + k + ": " + e.what());
      }
    }
  }

  ScanOptions scan() const {
    ScanOptions o;
    o.lambda_tol = lambda_tol;
    o.touch_tol = touch_tol;
    o.pole_offset = pole_offset;
    o.extra_modes = extra_modes;
    o.threads = threads;
    return o;
  }

  PlanarOptions planar() const {
    PlanarOptions o;
    o.nodes = nodes;
    return o;
  }
};

// Flags registered on a subcommand; applied over the run block only when
// given, so the precedence is flags > run block > environment > defaults.
class FlagSet {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& name, T Settings::*field, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    appliers_.push_back([opt, value, field](Settings& s) {
      if (opt->count() > 0) s.*field = *value;
    });
  }
  void add_flag(CLI::App* app, const std::string& name, bool Settings::*field, bool set_to,
                const std::string& help) {
    CLI::Option* opt = app->add_flag(name, help);
    appliers_.push_back([opt, field, set_to](Settings& s) {
      if (opt->count() > 0) s.*field = set_to;
    });
  }
  void apply(Settings& s) const {
    for (const auto& f : appliers_) f(s);
  }

 private:
  std::vector<std::function<void(Settings&)>> appliers_;
};

struct Command {
  std::string medium_path;
  std::string out_dir = "itecount-out";
  FlagSet flags;
  // probe-dtn
  std::vector<int> modes;
  std::vector<double> lambdas;
  std::string op = "both";
};

Settings effective(const Command& cmd, const MediumSpec& spec) {
  Settings s;
  if (const char* env = std::getenv("ITE_THREADS")) {
    try {
      s.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("ITE_THREADS is not an integer: ") + env);
    }
  }
  s.apply(spec.run);
  cmd.flags.apply(s);
  if (s.threads < 1) throw ConfigError("threads must be >= 1");
  if (s.backend != "auto" && s.backend != "radial" && s.backend != "planar") {
    throw ConfigError("backend must be auto, radial or planar");
  }
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string medium_digest(const MediumSpec& spec) {
  return canonical_digest(spec.source.is_null() ? spec.to_json() : spec.source);
}

const char* verdict_word(bool ok) { return ok ? "yes" : "no"; }

// Constants and the discreteness verdict, with the exit policy shared by
// validate and the counting verbs.
MediumConstants checked_constants(const MediumSpec& spec, const DiscretenessReport& disc) {
  MediumConstants c;
  try {
    c = medium_constants(spec);
  } catch (const GammaZeroError& e) {
    fail(kGammaZero, "GammaZeroError", e.what());
  } catch (const RegimeError& e) {
    fail(kNotDiscrete, "RegimeError", e.what());
  }
  if (!disc.discreteness_guaranteed) {
    fail(kNotDiscrete, "DiscretenessNotGuaranteed", "no discreteness condition holds for this medium");
  }
  return c;
}

int run_validate(const Command& cmd) {
  const MediumSpec spec = MediumSpec::load(cmd.medium_path);
  const DiscretenessReport disc = validate_discreteness(spec);
  std::printf("medium   %s (d=%d, %s)\n", spec.name.empty() ? "-" : spec.name.c_str(), spec.dimension,
              spec.separable() ? (spec.has_obstacle() ? "separable, obstacle" : "separable") : "planar");
  std::printf("%-14s %-15s %8s %12s  %s\n", "condition", "verdict", "samples", "extreme", "statement");
  for (const auto& c : disc.conditions) {
    std::printf("%-14s %-15s %8d %12.5g  %s\n", c.id.c_str(), to_string(c.verdict), c.samples,
                c.extreme, c.condition.c_str());
  }
  std::printf("discreteness guaranteed: %s\n", verdict_word(disc.discreteness_guaranteed));
  std::printf("gamma    %.17g\n", compute_gamma(spec));
  const MediumConstants c = checked_constants(spec, disc);
  std::printf("sigma    %d\ndelta    %d/%d\nregime   %s\nweyl     %.17g\n", c.sigma, c.delta_numerator,
              c.delta_denominator, to_string(c.regime), c.weyl_coeff);
  return kOk;
}

bool use_planar(const Settings& s, const MediumSpec& spec) {
  if (s.backend == "planar") {
    if (spec.dimension != 2 || spec.has_obstacle() || !spec.a.is_constant() || !spec.n.is_constant()) {
      throw ConfigError("the planar backend needs d = 2, constant coefficients and no obstacle");
    }
    return true;
  }
  if (s.backend == "radial" && !spec.separable()) throw ConfigError("the radial backend needs a separable medium");
  return !spec.separable();
}

CurveSpec curve_of(const MediumSpec& spec) {
  if (spec.boundary_curve) return *spec.boundary_curve;
  CurveSpec c;
  c.family = "disk";
  c.radius = spec.radius();
  return c;
}

std::string planar_ites_csv(const PlanarResult& r) {
  std::string out = "lambda,multiplicity,kind,modes\n";
  for (const auto& i : r.ites) out += format_double(i.lambda) + "," + std::to_string(i.multiplicity) + ",regular,\n";
  return out;
}

json planar_json(const PlanarResult& r) {
  json gaps = json::array();
  for (const auto& g : r.gaps) gaps.push_back({{"lo", format_double(g.lo)}, {"hi", format_double(g.hi)}, {"operator", g.op}});
  return {{"nodes", r.nodes}, {"alpha", format_double(r.alpha)}, {"ite_count", r.ites.size()},
          {"gaps", gaps}, {"notes", r.notes}};
}

int run_planar_spectrum(const Command& cmd, const MediumSpec& spec, const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const double hi = s.lambda_max > 0 ? s.lambda_max : 30.0;
  const PlanarResult r = planar_find_ites(curve_of(spec), spec.a.constant_value(), spec.n.constant_value(), 0.0,
                                          hi, s.coarse_steps, s.planar());
  RunManifest m;
  m.medium_digest = medium_digest(spec);
  m.medium_name = spec.name;
  m.backend = "planar";
  m.alpha = r.alpha;
  m.lambda_max = hi;
  m.config = s.to_json();
  m.timings = {{"planar_sweep", seconds_since(t0)}};
  json summary = {{"manifest", m.to_json()}, {"planar", planar_json(r)}};
  write_files(cmd.out_dir, {{"ites.csv", planar_ites_csv(r)}, {"summary.json", summary.dump(2) + "\n"},
                            {"timings.json", json{{"planar_sweep", format_double(m.timings[0].second)}}.dump(2) + "\n"}});
  std::printf("planar backend: %zu ITEs in (%.6g, %.6g], N = %d, %zu skipped windows\n", r.ites.size(), r.alpha,
              hi, r.nodes, r.gaps.size());
  return kOk;
}

int run_counting(const Command& cmd, const std::string& verb) {
  const MediumSpec spec = MediumSpec::load(cmd.medium_path);
  Settings s = effective(cmd, spec);
  const DiscretenessReport disc = validate_discreteness(spec);
  checked_constants(spec, disc);
  if (use_planar(s, spec)) {
    if (verb != "spectrum") throw ConfigError(verb + " needs a separable medium");
    return run_planar_spectrum(cmd, spec, s);
  }
  if (s.lambda_max <= 0) s.lambda_max = verb == "spectrum" ? 60.0 : 2000.0;

  const auto t0 = std::chrono::steady_clock::now();
  FindOptions fo;
  fo.scan = s.scan();
  fo.points_per_decade = s.points_per_decade;
  fo.strict_accounting = s.strict;
  const IteRun run = find_ites(spec, s.lambda_max, fo);
  const double t_find = seconds_since(t0);

  ReportBundle b;
  b.report = &run.report;
  b.ites = &run.ites;
  b.events = &run.scan.events;
  b.warnings = run.scan.warnings;
  b.manifest.medium_digest = medium_digest(spec);
  b.manifest.medium_name = spec.name;
  b.manifest.alpha = run.alpha;
  b.manifest.lambda_max = s.lambda_max;
  b.manifest.points_per_decade = s.points_per_decade;
  b.manifest.mode_cutoff = run.scan.mode_cutoff;
  b.manifest.tolerances = {{"lambda_tol", s.lambda_tol}, {"touch_tol", s.touch_tol},
                           {"pole_offset", s.pole_offset}, {"singular_tol", fo.scan.singular_tol},
                           {"singular_offset", fo.scan.singular_offset}};
  b.manifest.config = s.to_json();
  b.manifest.timings = {{"find_ites", t_find}};
  if (verb != "spectrum") b.weyl = weyl_check(run.report, s.epsilon);
  write_report(cmd.out_dir, b);

  const auto& rep = run.report;
  const std::size_t last = rep.grid.size() - 1;
  std::printf("alpha %.10g  modes <= %d  ITEs %zu  N_T(%g) = %lld\n", run.alpha, run.scan.mode_cutoff,
              run.ites.size(), s.lambda_max, rep.N_T[last]);
  std::printf("identities: bookkeeping %s  NT %s  sandwich %s\n", verdict_word(rep.bookkeeping_holds()),
              verdict_word(rep.nt_holds()), verdict_word(rep.sandwich_holds()));
  if (b.weyl) {
    const WeylFit& f = *b.weyl;
    std::printf("weyl window [%g, %g]: min ratio %.6f  mean %.6f  slope %.6f\n", f.window_lo, f.window_hi,
                f.min_ratio, f.mean_ratio, f.slope);
    std::printf("n_minus exponent %.6f (bound %.6f)\n", f.n_minus_exponent, f.exponent_bound);
    std::printf("bound satisfied: %s\n", verdict_word(f.bound_satisfied));
    if (!f.bound_satisfied) {
      fail(kBoundFailed, "BoundNotSatisfied",
           "min N_T ratio " + format_double(f.min_ratio) + " below 1 - epsilon");
    }
  }
  return kOk;
}

int run_estimates(const Command& cmd) {
  const MediumSpec spec = MediumSpec::load(cmd.medium_path);
  Settings s = effective(cmd, spec);
  if (!spec.separable()) throw ConfigError("estimate-check needs a separable medium");
  if (s.lambda_max <= 0) s.lambda_max = 1000.0;
  const SeparableModel model(spec);
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = log_grid(s.estimate_lo, s.lambda_max, s.estimate_ppd);
  const EstimateSummary est = operator_estimate_check(model, grid, s.estimate_modes, s.near_poles, s.near_distance);

  ReportBundle b;
  b.estimates = est;
  b.manifest.medium_digest = medium_digest(spec);
  b.manifest.medium_name = spec.name;
  b.manifest.lambda_max = s.lambda_max;
  b.manifest.config = s.to_json();
  b.manifest.timings = {{"estimates", seconds_since(t0)}};
  write_report(cmd.out_dir, b);
  for (std::size_t d = 0; d < est.c1_decade_max.size(); ++d) {
    std::printf("decade [%g, %g): C1 %.6g  C2 %.6g\n", est.decade_edges[d], est.decade_edges[d + 1],
                est.c1_decade_max[d], est.c2_decade_max[d]);
  }
  std::printf("decade stable: %s\n", verdict_word(est.decade_stable));
  if (!est.decade_stable) fail(kBoundFailed, "EstimateGrowth", "top-decade maximum exceeds twice the previous one");
  return kOk;
}

int run_probe(const Command& cmd) {
  const MediumSpec spec = MediumSpec::load(cmd.medium_path);
  if (cmd.modes.empty() || cmd.lambdas.empty()) throw ConfigError("probe-dtn needs --mode and --lambda lists");
  std::vector<Operator> ops;
  if (cmd.op == "plain" || cmd.op == "both") ops.push_back(Operator::plain);
  if (cmd.op == "a_n" || cmd.op == "both") ops.push_back(Operator::a_n);
  if (ops.empty()) throw ConfigError("--op must be plain, a_n or both");
  const SeparableModel model(spec);
  std::printf("operator,mode,lambda,value,nearest_pole,distance_to_pole,pole_marker\n");
  for (Operator op : ops) {
    for (int m : cmd.modes) {
      for (double lam : cmd.lambdas) {
        const DtnSample d = dtn_mode(model, op, m, lam);
        std::printf("%s,%d,%s,%s,%s,%s,%d\n", to_string(op), m, format_double(lam).c_str(),
                    format_double(d.value).c_str(), format_double(d.nearest_pole).c_str(),
                    format_double(d.distance_to_pole).c_str(), d.pole_marker ? 1 : 0);
      }
    }
  }
  return kOk;
}

int run_cross_check(const Command& cmd) {
  const MediumSpec spec = MediumSpec::load(cmd.medium_path);
  Settings s = effective(cmd, spec);
  if (!spec.separable() || spec.dimension != 2 || spec.has_obstacle() || !spec.a.is_constant() ||
      !spec.n.is_constant()) {
    throw ConfigError("cross-check needs a disk with constant coefficients and no obstacle");
  }
  if (s.lambda_max <= 0) s.lambda_max = 30.0;
  const DiscretenessReport disc = validate_discreteness(spec);
  checked_constants(spec, disc);

  const auto t0 = std::chrono::steady_clock::now();
  FindOptions fo;
  fo.scan = s.scan();
  const IteRun radial = find_ites(spec, s.lambda_max, fo);
  const double t_radial = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const PlanarResult planar = planar_find_ites(curve_of(spec), spec.a.constant_value(), spec.n.constant_value(),
                                               radial.alpha, s.lambda_max, s.coarse_steps, s.planar());
  const double t_planar = seconds_since(t1);

  bool ok = radial.ites.size() == planar.ites.size();
  double worst = 0.0;
  json pairs = json::array();
  for (std::size_t i = 0; i < std::min(radial.ites.size(), planar.ites.size()); ++i) {
    const double diff = std::abs(radial.ites[i].lambda - planar.ites[i].lambda);
    worst = std::max(worst, diff);
    ok = ok && diff <= s.cross_tol && radial.ites[i].multiplicity == planar.ites[i].multiplicity;
    pairs.push_back({{"radial", format_double(radial.ites[i].lambda)},
                     {"planar", format_double(planar.ites[i].lambda)},
                     {"radial_multiplicity", radial.ites[i].multiplicity},
                     {"planar_multiplicity", planar.ites[i].multiplicity}});
    std::printf("%.12f x%d   %.12f x%d   %.3e\n", radial.ites[i].lambda, radial.ites[i].multiplicity,
                planar.ites[i].lambda, planar.ites[i].multiplicity, diff);
  }
  RunManifest m;
  m.medium_digest = medium_digest(spec);
  m.medium_name = spec.name;
  m.backend = "radial+planar";
  m.alpha = radial.alpha;
  m.lambda_max = s.lambda_max;
  m.config = s.to_json();
  json summary = {{"manifest", m.to_json()},
                  {"pairs", pairs},
                  {"radial_count", radial.ites.size()},
                  {"planar", planar_json(planar)},
                  {"max_difference", format_double(worst)},
                  {"verdicts", {{"within_tolerance", ok}}}};
  write_files(cmd.out_dir, {{"summary.json", summary.dump(2) + "\n"},
                            {"timings.json", json{{"radial", format_double(t_radial)},
                                                  {"planar", format_double(t_planar)}}.dump(2) + "\n"}});
  std::printf("backends agree within %g: %s\n", s.cross_tol, verdict_word(ok));
  if (!ok) fail(kBoundFailed, "BackendMismatch", "max difference " + format_double(worst));
  return kOk;
}

void add_counting_flags(CLI::App* sub, Command& cmd) {
  cmd.flags.add(sub, "--lambda-max", &Settings::lambda_max, "Upper end of the lambda range");
  cmd.flags.add(sub, "--points-per-decade", &Settings::points_per_decade, "Counting grid density");
  cmd.flags.add(sub, "--threads", &Settings::threads, "Worker threads (default: $ITE_THREADS or 1)");
  cmd.flags.add(sub, "--lambda-tol", &Settings::lambda_tol, "Root tolerance in lambda");
  cmd.flags.add(sub, "--touch-tol", &Settings::touch_tol, "Tangential-zero threshold");
  cmd.flags.add(sub, "--pole-offset", &Settings::pole_offset, "Relative one-sided pole offset");
  cmd.flags.add(sub, "--extra-modes", &Settings::extra_modes, "Modes scanned beyond the verified cutoff");
  cmd.flags.add(sub, "--epsilon", &Settings::epsilon, "Weyl bound slack");
  cmd.flags.add(sub, "--backend", &Settings::backend, "auto, radial or planar");
  cmd.flags.add(sub, "--coarse-steps", &Settings::coarse_steps, "Planar sweep steps");
  cmd.flags.add(sub, "--nodes", &Settings::nodes, "Planar boundary nodes (0: automatic)");
  cmd.flags.add_flag(sub, "--no-strict", &Settings::strict, false, "Report accounting mismatches instead of failing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior transmission eigenvalue counting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ite::version()));

  Command cmd;
  auto medium = [&](CLI::App* sub) {
    sub->add_option("medium", cmd.medium_path, "Medium JSON file")->required()->check(CLI::ExistingFile);
  };
  auto out = [&](CLI::App* sub) { sub->add_option("-o,--out", cmd.out_dir, "Output directory"); };

  CLI::App* validate = app.add_subcommand("validate", "Discreteness verdicts and medium constants");
  medium(validate);
  std::map<std::string, CLI::App*> counting;
  for (const char* verb : {"spectrum", "count", "weyl-check"}) {
    CLI::App* sub = app.add_subcommand(verb, std::string(verb) == "spectrum" ? "ITE list and counting report"
                                                                              : "Counting report and Weyl-bound check");
    medium(sub);
    out(sub);
    add_counting_flags(sub, cmd);
    counting[verb] = sub;
  }
  CLI::App* estimate = app.add_subcommand("estimate-check", "Normalized remainders of the a_n symbol");
  medium(estimate);
  out(estimate);
  cmd.flags.add(estimate, "--lambda-max", &Settings::lambda_max, "Upper end of the lambda grid");
  cmd.flags.add(estimate, "--lambda-lo", &Settings::estimate_lo, "Lower end of the lambda grid");
  cmd.flags.add(estimate, "--modes", &Settings::estimate_modes, "Highest mode");
  cmd.flags.add(estimate, "--points-per-decade", &Settings::estimate_ppd, "Grid density");
  cmd.flags.add(estimate, "--near-poles", &Settings::near_poles, "Number of near-pole sample pairs");
  cmd.flags.add(estimate, "--near-distance", &Settings::near_distance, "Distance of near-pole samples");

  CLI::App* probe = app.add_subcommand("probe-dtn", "Per-mode DtN symbol samples (CSV on stdout)");
  medium(probe);
  probe->add_option("--mode", cmd.modes, "Modes")->required();
  probe->add_option("--lambda", cmd.lambdas, "Lambda values")->required();
  probe->add_option("--op", cmd.op, "plain, a_n or both");

  CLI::App* cross = app.add_subcommand("cross-check", "Radial versus planar ITEs on a disk");
  medium(cross);
  out(cross);
  cmd.flags.add(cross, "--lambda-max", &Settings::lambda_max, "Upper end of the comparison");
  cmd.flags.add(cross, "--coarse-steps", &Settings::coarse_steps, "Planar sweep steps");
  cmd.flags.add(cross, "--nodes", &Settings::nodes, "Planar boundary nodes (0: automatic)");
  cmd.flags.add(cross, "--tolerance", &Settings::cross_tol, "Allowed lambda difference");
  cmd.flags.add(cross, "--threads", &Settings::threads, "Worker threads");

  auto report = [](const Exit& e) {
    std::cerr << "itecount: reason=" << e.kind << " exit=" << e.code << " message=" << e.message << "\n";
    return e.code;
  };
  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      fail(kUsage, "UsageError", e.what());
    }
    if (validate->parsed()) return run_validate(cmd);
    for (const auto& [verb, sub] : counting) {
      if (sub->parsed()) return run_counting(cmd, verb);
    }
    if (estimate->parsed()) return run_estimates(cmd);
    if (probe->parsed()) return run_probe(cmd);
    if (cross->parsed()) return run_cross_check(cmd);
    fail(kUsage, "UsageError", "no verb given");
  } catch (const Exit& e) {
    return report(e);
  } catch (const GammaZeroError& e) {
    return report({kGammaZero, e.kind(), e.what()});
  } catch (const RegimeError& e) {
    return report({kNotDiscrete, e.kind(), e.what()});
  } catch (const ConfigError& e) {
    return report({kUsage, e.kind(), e.what()});
  } catch (const IoError& e) {
    return report({kUsage, e.kind(), e.what()});
  } catch (const GeometryError& e) {
    return report({kUsage, e.kind(), e.what()});
  } catch (const ite::Error& e) {
    return report({kNumeric, e.kind(), e.what()});
  } catch (const std::exception& e) {
    return report({kNumeric, "InternalError", e.what()});
  }
}
