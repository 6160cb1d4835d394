#include "ite/media.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ite/errors.hpp"

namespace ite {

namespace {

constexpr double kExactTol = 1e-14;
constexpr double kConditionTol = 1e-12;

// Radial sample grid on [inner, R] with `count` points.
std::vector<double> radial_grid(const MediumSpec& spec, int count) {
  const double lo = spec.has_obstacle() ? spec.obstacle_radius : 0.0;
  const double hi = spec.radius();
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) r[i] = lo + (hi - lo) * i / (count - 1);
  return r;
}

// Boundary value of a profile on the outer boundary. Radial profiles are
// constant along the sphere, and planar media only allow constants.
double boundary_value(const MediumSpec& spec, const CoefficientProfile& p) {
  return spec.separable() ? p.value(spec.radius()) : p.constant_value();
}

double surface_factor(int d) { return d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

double integrate_radial(const MediumSpec& spec, const std::function<double(double)>& density) {
  const int d = spec.dimension;
  const double lo = spec.obstacle_radius, hi = spec.radius();
  auto f = [&](double r) { return density(r) * std::pow(r, d - 1); };
  double err = 0.0;
  const double val =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12, &err);
  return surface_factor(d) * val;
}

bool a_is_identically_one(const MediumSpec& spec) {
  if (spec.a.is_constant()) return std::abs(spec.a.constant_value() - 1.0) <= kExactTol;
  if (!spec.separable()) return false;
  for (double r : radial_grid(spec, 1024)) {
    if (std::abs(spec.a.value(r) - 1.0) > kExactTol) return false;
  }
  return true;
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::a_contrast ? "a_contrast" : "n_contrast"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

double unit_ball_volume(int d) {
  if (d == 2) return std::numbers::pi;
  if (d == 3) return 4.0 * std::numbers::pi / 3.0;
  throw ConfigError("dimension must be 2 or 3");
}

MediumSpec MediumSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("medium specification must be a JSON object");
  static const std::set<std::string> known = {"dimension", "outer_radius", "boundary_curve",
                                              "obstacle_radius", "a", "n", "name", "run"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown medium field '" + key + "'");
  }
  MediumSpec s;
  s.source = j;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) {
    throw ConfigError("medium requires integer 'dimension'");
  }
  s.dimension = j["dimension"].get<int>();
  const bool has_r = j.contains("outer_radius");
  const bool has_c = j.contains("boundary_curve");
  if (has_r == has_c) throw ConfigError("exactly one of 'outer_radius' and 'boundary_curve' is required");
  if (has_r) {
    if (!j["outer_radius"].is_number()) throw ConfigError("'outer_radius' must be numeric");
    s.outer_radius = j["outer_radius"].get<double>();
  } else {
    s.boundary_curve = CurveSpec::from_json(j["boundary_curve"]);
  }
  if (j.contains("obstacle_radius")) {
    if (!j["obstacle_radius"].is_number()) throw ConfigError("'obstacle_radius' must be numeric");
    s.obstacle_radius = j["obstacle_radius"].get<double>();
  }
  if (!j.contains("a") || !j.contains("n")) throw ConfigError("medium requires coefficients 'a' and 'n'");
  s.a = CoefficientProfile::from_json(j["a"]);
  s.n = CoefficientProfile::from_json(j["n"]);
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("'name' must be a string");
    s.name = j["name"].get<std::string>();
  }
  if (j.contains("run")) {
    if (!j["run"].is_object()) throw ConfigError("'run' must be an object");
    s.run = j["run"];
  }
  s.validate();
  return s;
}

MediumSpec MediumSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open medium file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json MediumSpec::to_json() const {
  nlohmann::json j = {{"dimension", dimension}, {"a", a.to_json()}, {"n", n.to_json()}};
  if (outer_radius) j["outer_radius"] = *outer_radius;
  if (boundary_curve) j["boundary_curve"] = boundary_curve->to_json();
  if (obstacle_radius > 0.0) j["obstacle_radius"] = obstacle_radius;
  if (!name.empty()) j["name"] = name;
  if (!run.empty()) j["run"] = run;
  return j;
}

void MediumSpec::validate() const {
  if (dimension != 2 && dimension != 3) throw ConfigError("dimension must be 2 or 3");
  if (separable()) {
    const double R = *outer_radius;
    if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("outer_radius must be positive");
    if (!(obstacle_radius >= 0.0 && obstacle_radius < R)) {
      throw ConfigError("obstacle_radius must lie in [0, outer_radius)");
    }
    for (double r : radial_grid(*this, 1024)) {
      if (!(a.value(r) > 0.0) || !(n.value(r) > 0.0)) {
        throw ConfigError("coefficients must be positive on the closed domain (r = " +
                          std::to_string(r) + ")");
      }
    }
  } else {
    if (dimension != 2) throw ConfigError("boundary curves require dimension 2");
    if (obstacle_radius != 0.0) throw ConfigError("planar media do not support an obstacle");
    if (!a.is_constant() || !n.is_constant()) {
      throw ConfigError("planar media require constant coefficients");
    }
  }
}

double MediumSpec::radius() const {
  if (!outer_radius) throw GeometryError("medium is not separable (no outer radius)");
  return *outer_radius;
}

double MediumSpec::volume() const {
  if (separable()) return unit_ball_volume(dimension) * std::pow(*outer_radius, dimension);
  return BoundaryCurve::sample(*boundary_curve, 1024).area();
}

MediumSpec MediumSpec::disk(double radius, double a, double n, double obstacle) {
  MediumSpec s;
  s.dimension = 2;
  s.outer_radius = radius;
  s.obstacle_radius = obstacle;
  s.a = CoefficientProfile::constant(a);
  s.n = CoefficientProfile::constant(n);
  s.validate();
  s.source = s.to_json();
  return s;
}

MediumSpec MediumSpec::ball(double radius, double a, double n, double obstacle) {
  MediumSpec s = disk(radius, a, n, obstacle);
  s.dimension = 3;
  s.source = s.to_json();
  return s;
}

MediumSpec MediumSpec::planar(const CurveSpec& curve, double a, double n) {
  MediumSpec s;
  s.dimension = 2;
  s.boundary_curve = curve;
  s.a = CoefficientProfile::constant(a);
  s.n = CoefficientProfile::constant(n);
  s.validate();
  s.source = s.to_json();
  return s;
}

double compute_gamma(const MediumSpec& spec) {
  const int d = spec.dimension;
  const double vol = spec.volume();
  if (!spec.separable()) {
    return vol * (1.0 - std::pow(spec.n.constant_value() / spec.a.constant_value(), 0.5 * d));
  }
  if (spec.a.is_constant() && spec.n.is_constant()) {
    const double ratio = std::pow(spec.n.constant_value() / spec.a.constant_value(), 0.5 * d);
    const double shell = unit_ball_volume(d) *
                         (std::pow(spec.radius(), d) - std::pow(spec.obstacle_radius, d));
    return vol - ratio * shell;
  }
  return vol - integrate_radial(spec, [&](double r) {
           return std::pow(spec.n.value(r) / spec.a.value(r), 0.5 * d);
         });
}

Regime detect_regime(const MediumSpec& spec) {
  const double a_b = boundary_value(spec, spec.a);
  const double n_b = boundary_value(spec, spec.n);
  if (std::abs(a_b - 1.0) > kExactTol) return Regime::a_contrast;
  if (a_is_identically_one(spec) && std::abs(n_b - 1.0) > kExactTol) return Regime::n_contrast;
  throw RegimeError(
      "no boundary contrast: a = 1 on the boundary and either a is not identically 1 or n = 1 on "
      "the boundary");
}

MediumConstants medium_constants(const MediumSpec& spec) {
  spec.validate();
  MediumConstants c;
  c.volume = spec.volume();
  c.gamma = compute_gamma(spec);

  std::optional<Regime> regime;
  std::string regime_msg;
  try {
    regime = detect_regime(spec);
  } catch (const RegimeError& e) {
    regime_msg = e.what();
  }
  if (std::abs(c.gamma) < 1e-12 * c.volume) {
    std::ostringstream os;
    os << "gamma = " << c.gamma << " vanishes relative to the volume " << c.volume;
    if (!regime) os << "; " << regime_msg;
    throw GammaZeroError(os.str(), c.gamma, !regime);
  }
  if (!regime) throw RegimeError(regime_msg);

  const int d = spec.dimension;
  c.regime = *regime;
  if (c.regime == Regime::a_contrast) {
    c.sigma = (1.0 - boundary_value(spec, spec.a)) > 0 ? 1 : -1;
    c.delta_denominator = d + 1;
  } else {
    c.sigma = (boundary_value(spec, spec.n) - 1.0) > 0 ? 1 : -1;
    c.delta_denominator = 2 * d;
  }
  c.delta_numerator = 1;
  c.weyl_coeff = unit_ball_volume(d) / std::pow(2.0 * std::numbers::pi, d) * std::abs(c.gamma);
  return c;
}

nlohmann::json DiscretenessReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : conditions) {
    list.push_back({{"id", c.id},
                    {"condition", c.condition},
                    {"verdict", to_string(c.verdict)},
                    {"samples", c.samples},
                    {"extreme", c.extreme}});
  }
  return {{"conditions", list}, {"discreteness_guaranteed", discreteness_guaranteed}};
}

DiscretenessReport validate_discreteness(const MediumSpec& spec, int boundary_samples,
                                         int radial_samples) {
  spec.validate();
  // Boundary samples: for separable media the coefficients are radial, so
  // every boundary point sees the value at r = R; planar media are constant.
  std::vector<double> a_bd(boundary_samples), n_bd(boundary_samples);
  for (int i = 0; i < boundary_samples; ++i) {
    a_bd[i] = boundary_value(spec, spec.a);
    n_bd[i] = boundary_value(spec, spec.n);
  }
  std::vector<double> a_dom, n_dom;
  if (spec.separable()) {
    for (double r : radial_grid(spec, radial_samples)) {
      a_dom.push_back(spec.a.value(r));
      n_dom.push_back(spec.n.value(r));
    }
  } else {
    a_dom.assign(radial_samples, spec.a.constant_value());
    n_dom.assign(radial_samples, spec.n.constant_value());
  }
  auto min_abs = [](const std::vector<double>& v, auto f) {
    double m = INFINITY;
    for (double x : v) m = std::min(m, std::abs(f(x)));
    return m;
  };

  DiscretenessReport rep;
  const bool obstacle = spec.has_obstacle();
  const bool a_one = a_is_identically_one(spec);

  {
    ConditionVerdict c{"contrast.boundary", "(a-1)(an-1) != 0 on the outer boundary"};
    double m = INFINITY;
    for (int i = 0; i < boundary_samples; ++i) {
      m = std::min(m, std::abs((a_bd[i] - 1.0) * (a_bd[i] * n_bd[i] - 1.0)));
    }
    c.samples = boundary_samples;
    c.extreme = m;
    c.verdict = m > kConditionTol ? Verdict::satisfied : Verdict::violated;
    rep.conditions.push_back(c);
  }
  {
    // Holds for all but finitely many scalings of n; a given n cannot be
    // certified by sampling.
    ConditionVerdict c{"contrast.scaled", "a-1 != 0 on the boundary, generic scaling of n"};
    rep.conditions.push_back(c);
  }
  {
    ConditionVerdict c{"contrast.interior", "a-1 != 0 on the closed domain, no obstacle, integral of n != 1"};
    if (!obstacle) {
      const double m = min_abs(a_dom, [](double x) { return x - 1.0; });
      const double integral = spec.separable()
                                  ? integrate_radial(spec, [&](double r) { return spec.n.value(r); })
                                  : spec.volume() * spec.n.constant_value();
      c.samples = radial_samples;
      c.extreme = std::min(m, std::abs(integral - 1.0));
      c.verdict = (m > kConditionTol && std::abs(integral - 1.0) > kConditionTol) ? Verdict::satisfied
                                                                                  : Verdict::violated;
    }
    rep.conditions.push_back(c);
  }
  const double n_bd_gap = min_abs(n_bd, [](double x) { return x - 1.0; });
  {
    ConditionVerdict c{"index.boundary", "a = 1, no obstacle, n-1 != 0 on the outer boundary"};
    if (a_one && !obstacle) {
      c.samples = boundary_samples;
      c.extreme = n_bd_gap;
      c.verdict = n_bd_gap > kConditionTol ? Verdict::satisfied : Verdict::violated;
    }
    rep.conditions.push_back(c);
  }
  {
    ConditionVerdict c{"index.obstacle_boundary", "a = 1, obstacle present, n-1 != 0 on the outer boundary"};
    if (a_one && obstacle) {
      c.samples = boundary_samples;
      c.extreme = n_bd_gap;
      c.verdict = n_bd_gap > kConditionTol ? Verdict::satisfied : Verdict::violated;
    }
    rep.conditions.push_back(c);
  }
  {
    ConditionVerdict c{"index.obstacle_below_one", "a = 1, obstacle present, n < 1 on the closed domain"};
    if (a_one && obstacle) {
      double worst = -INFINITY;
      for (double x : n_dom) worst = std::max(worst, x);
      c.samples = radial_samples;
      c.extreme = 1.0 - worst;
      c.verdict = worst < 1.0 ? Verdict::satisfied : Verdict::violated;
    }
    rep.conditions.push_back(c);
  }
  for (const auto& c : rep.conditions) {
    if (c.verdict == Verdict::satisfied) rep.discreteness_guaranteed = true;
  }
  return rep;
}

double pick_alpha(const MediumSpec& spec, double first_dirichlet, double first_an,
                  const IteProbe& probe) {
  spec.validate();
  if (!(first_dirichlet > 0.0) || !(first_an > 0.0)) {
    throw AlphaError("first Dirichlet eigenvalues must be positive");
  }
  const double base = 0.5 * std::min(first_dirichlet, first_an);
  if (!probe || !probe(base)) return base;
  for (int j = 1; j <= 10; ++j) {
    for (int sign : {1, -1}) {
      const double cand = base * (1.0 + sign * 0.01 * j);
      if (!probe(cand)) return cand;
    }
  }
  throw AlphaError("every candidate within 10% of " + std::to_string(base) +
                   " lies within probe tolerance of an ITE");
}

}  // namespace ite
