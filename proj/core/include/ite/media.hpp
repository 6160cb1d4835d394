#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ite/curve.hpp"
#include "ite/profiles.hpp"

namespace ite {

/// Medium and geometry of a transmission problem. Separable media carry an
/// outer radius (disk or ball, optionally with a concentric Dirichlet
/// obstacle of radius r0); planar media carry a boundary curve instead.
struct MediumSpec {
  int dimension = 2;
  std::optional<double> outer_radius;
  std::optional<CurveSpec> boundary_curve;
  double obstacle_radius = 0.0;
  CoefficientProfile a = CoefficientProfile::constant(1.0);
  CoefficientProfile n = CoefficientProfile::constant(1.0);

  std::string name;
  nlohmann::json run = nlohmann::json::object();  ///< optional run configuration
  nlohmann::json source;                          ///< document as parsed, for digests

  static MediumSpec from_json(const nlohmann::json& j);
  static MediumSpec load(const std::string& path);
  nlohmann::json to_json() const;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  bool separable() const noexcept { return outer_radius.has_value(); }
  bool has_obstacle() const noexcept { return obstacle_radius > 0.0; }
  double radius() const;  ///< outer radius; GeometryError for planar media
  double volume() const;  ///< Vol(O), the obstacle included

  /// Convenience constructors used by tests and examples.
  static MediumSpec disk(double radius, double a, double n, double obstacle = 0.0);
  static MediumSpec ball(double radius, double a, double n, double obstacle = 0.0);
  static MediumSpec planar(const CurveSpec& curve, double a, double n);
};

enum class Regime { a_contrast, n_contrast };
const char* to_string(Regime r);

struct MediumConstants {
  double gamma = 0.0;
  int sigma = 1;
  int delta_numerator = 1;
  int delta_denominator = 4;
  double weyl_coeff = 0.0;
  Regime regime = Regime::n_contrast;
  double volume = 0.0;

  double delta() const noexcept { return double(delta_numerator) / delta_denominator; }
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Vol(O) minus the integral of (n/a)^{d/2} over O minus the obstacle.
double compute_gamma(const MediumSpec& spec);

/// Regime from the boundary and domain samples; RegimeError when neither
/// hypothesis holds.
Regime detect_regime(const MediumSpec& spec);

/// GammaZeroError (flagging a failed regime as well) or RegimeError when the
/// lower bound does not apply.
MediumConstants medium_constants(const MediumSpec& spec);

enum class Verdict { satisfied, violated, not_applicable };
const char* to_string(Verdict v);

struct ConditionVerdict {
  std::string id;         ///< e.g. "contrast.boundary"
  std::string condition;  ///< short human-readable statement
  Verdict verdict = Verdict::not_applicable;
  int samples = 0;
  double extreme = 0.0;  ///< minimum |quantity| over samples (or the integral)
};

struct DiscretenessReport {
  std::vector<ConditionVerdict> conditions;
  bool discreteness_guaranteed = false;
  nlohmann::json to_json() const;
};

DiscretenessReport validate_discreteness(const MediumSpec& spec, int boundary_samples = 256,
                                         int radial_samples = 1024);

/// Returns true if an ITE lies within 1e-6 of the candidate.
using IteProbe = std::function<bool(double)>;

/// Reference point below both first Dirichlet eigenvalues that avoids ITEs.
/// Starts at half the smaller eigenvalue and tries shifts of +-1%, +-2%, ...
/// up to +-10%; AlphaError if every candidate is rejected.
double pick_alpha(const MediumSpec& spec, double first_dirichlet, double first_an,
                  const IteProbe& probe);

}  // namespace ite
