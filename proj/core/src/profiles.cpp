#include "ite/profiles.hpp"

#include <cmath>
#include <set>

#include "ite/errors.hpp"

namespace ite {

namespace {

struct ShapeInfo {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, ShapeInfo>& registry() {
  static const std::map<std::string, ShapeInfo> reg = {
      {"constant", {{"value"}, {}}},
      {"linear", {{"c0", "c1"}, {}}},
      {"quadratic", {{"c0", "c2"}, {}}},
      {"gaussian_bump", {{"base", "amplitude", "width"}, {"center"}}},
  };
  return reg;
}

}  // namespace

CoefficientProfile CoefficientProfile::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("coefficient must be a positive finite constant, got " + std::to_string(value));
  }
  CoefficientProfile p;
  p.kind_ = Kind::constant;
  p.shape_ = Shape::constant;
  p.id_ = "constant";
  p.params_ = {{"value", value}};
  p.p0_ = value;
  return p;
}

CoefficientProfile CoefficientProfile::radial(const std::string& profile_id,
                                              const std::map<std::string, double>& params) {
  const auto it = registry().find(profile_id);
  if (it == registry().end()) throw ConfigError("unknown radial profile '" + profile_id + "'");
  const ShapeInfo& info = it->second;
  for (const auto& name : info.required) {
    if (!params.contains(name)) {
      throw ConfigError("profile '" + profile_id + "' requires parameter '" + name + "'");
    }
  }
  for (const auto& [name, v] : params) {
    if (!info.required.contains(name) && !info.optional.contains(name)) {
      throw ConfigError("profile '" + profile_id + "' has no parameter '" + name + "'");
    }
    if (!std::isfinite(v)) throw ConfigError("profile parameter '" + name + "' is not finite");
  }

  CoefficientProfile p;
  p.kind_ = Kind::radial;
  p.id_ = profile_id;
  p.params_ = params;
  if (profile_id == "constant") {
    p.shape_ = Shape::constant;
    p.p0_ = p.param("value");
    if (!(p.p0_ > 0.0)) throw ConfigError("constant profile must be positive");
  } else if (profile_id == "linear") {
    p.shape_ = Shape::linear;
    p.p0_ = p.param("c0");
    p.p1_ = p.param("c1");
  } else if (profile_id == "quadratic") {
    p.shape_ = Shape::quadratic;
    p.p0_ = p.param("c0");
    p.p2_ = p.param("c2");
  } else {
    p.shape_ = Shape::gaussian_bump;
    p.p0_ = p.param("base");
    p.p1_ = p.param("amplitude");
    p.p2_ = p.param("width");
    p.p3_ = params.contains("center") ? params.at("center") : 0.0;
    if (!(p.p2_ > 0.0)) throw ConfigError("gaussian_bump width must be positive");
  }
  return p;
}

double CoefficientProfile::param(const char* name) const { return params_.at(name); }

bool CoefficientProfile::is_constant() const noexcept {
  switch (shape_) {
    case Shape::constant: return true;
    case Shape::linear: return p1_ == 0.0;
    case Shape::quadratic: return p2_ == 0.0;
    case Shape::gaussian_bump: return p1_ == 0.0;
  }
  return false;
}

double CoefficientProfile::constant_value() const {
  if (!is_constant()) throw ConfigError("profile '" + id_ + "' is not constant");
  return p0_;
}

double CoefficientProfile::value(double r) const {
  switch (shape_) {
    case Shape::constant: return p0_;
    case Shape::linear: return p0_ + p1_ * r;
    case Shape::quadratic: return p0_ + p2_ * r * r;
    case Shape::gaussian_bump: {
      const double s = (r - p3_) / p2_;
      return p0_ + p1_ * std::exp(-s * s);
    }
  }
  return p0_;
}

double CoefficientProfile::derivative(double r) const {
  switch (shape_) {
    case Shape::constant: return 0.0;
    case Shape::linear: return p1_;
    case Shape::quadratic: return 2.0 * p2_ * r;
    case Shape::gaussian_bump: {
      const double s = (r - p3_) / p2_;
      return -2.0 * s / p2_ * p1_ * std::exp(-s * s);
    }
  }
  return 0.0;
}

CoefficientProfile CoefficientProfile::from_json(const nlohmann::json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (!j.is_object()) throw ConfigError("coefficient must be a number or an object");
  const std::string kind = j.value("kind", std::string("constant"));
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "value" && key != "profile_id" && key != "params") {
      throw ConfigError("unknown coefficient field '" + key + "'");
    }
  }
  if (kind == "constant") {
    if (!j.contains("value") || !j["value"].is_number()) {
      throw ConfigError("constant coefficient requires numeric 'value'");
    }
    return constant(j["value"].get<double>());
  }
  if (kind != "radial") throw ConfigError("coefficient kind must be 'constant' or 'radial'");
  if (!j.contains("profile_id") || !j["profile_id"].is_string()) {
    throw ConfigError("radial coefficient requires 'profile_id'");
  }
  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("'params' must be an object");
    for (const auto& [key, v] : j["params"].items()) {
      if (!v.is_number()) throw ConfigError("profile parameter '" + key + "' must be numeric");
      params[key] = v.get<double>();
    }
  }
  return radial(j["profile_id"].get<std::string>(), params);
}

nlohmann::json CoefficientProfile::to_json() const {
  if (kind_ == Kind::constant) return {{"kind", "constant"}, {"value", p0_}};
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : params_) params[k] = v;
  return {{"kind", "radial"}, {"profile_id", id_}, {"params", params}};
}

}  // namespace ite
