#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace ite {

/// A positive coefficient a(r) or n(r), either constant or one of the named
/// radial profiles. Arbitrary code is never accepted from configuration, only
/// a registry id plus numeric parameters:
///
///   constant       value
///   linear         c0 + c1 r
///   quadratic      c0 + c2 r^2
///   gaussian_bump  base + amplitude exp(-((r - center)/width)^2)
class CoefficientProfile {
 public:
  enum class Kind { constant, radial };

  static CoefficientProfile constant(double value);
  static CoefficientProfile radial(const std::string& profile_id,
                                   const std::map<std::string, double>& params);

  static CoefficientProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Kind kind() const noexcept { return kind_; }

  /// True for kind constant and for a radial profile that does not depend on r.
  bool is_constant() const noexcept;

  /// Requires is_constant().
  double constant_value() const;

  double value(double r) const;
  double derivative(double r) const;

  const std::string& profile_id() const noexcept { return id_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }

 private:
  enum class Shape { constant, linear, quadratic, gaussian_bump };

  CoefficientProfile() = default;
  double param(const char* name) const;

  Kind kind_ = Kind::constant;
  Shape shape_ = Shape::constant;
  std::string id_ = "constant";
  std::map<std::string, double> params_;
  // cached parameters
  double p0_ = 0, p1_ = 0, p2_ = 0, p3_ = 0;
};

}  // namespace ite
