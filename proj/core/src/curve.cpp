#include "ite/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "ite/errors.hpp"

namespace ite {

namespace {

Eigen::Matrix2d rotation_matrix(double angle) {
  Eigen::Matrix2d q;
  q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return q;
}

// r(t) and its first two derivatives for the fourier family
std::array<double, 3> radial_function(const CurveSpec& s, double t) {
  double r = s.cos_coeffs.empty() ? 0.0 : s.cos_coeffs[0];
  double r1 = 0.0, r2 = 0.0;
  for (std::size_t k = 1; k < s.cos_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    r += s.cos_coeffs[k] * std::cos(kk * t);
    r1 -= kk * s.cos_coeffs[k] * std::sin(kk * t);
    r2 -= kk * kk * s.cos_coeffs[k] * std::cos(kk * t);
  }
  for (std::size_t k = 1; k <= s.sin_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double c = s.sin_coeffs[k - 1];
    r += c * std::sin(kk * t);
    r1 += kk * c * std::cos(kk * t);
    r2 -= kk * kk * c * std::sin(kk * t);
  }
  return {r, r1, r2};
}

bool segments_cross(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                    const Eigen::Vector2d& q2) {
  auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

CurveSpec CurveSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("boundary_curve must be an object");
  CurveSpec s;
  s.family = j.value("family", std::string());
  auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("boundary_curve.") + key + " must be numeric");
    return j[key].get<double>();
  };
  auto list = [&](const char* key) {
    std::vector<double> v;
    if (!j.contains(key)) return v;
    if (!j[key].is_array()) throw ConfigError(std::string("boundary_curve.") + key + " must be a list");
    for (const auto& x : j[key]) {
      if (!x.is_number()) throw ConfigError(std::string("boundary_curve.") + key + " entries must be numeric");
      v.push_back(x.get<double>());
    }
    return v;
  };
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> known = {"family", "radius", "a",        "b",   "scale",
                                                "cos",    "sin",    "rotation", "center"};
    if (!known.contains(key)) throw ConfigError("unknown boundary_curve field '" + key + "'");
  }
  s.rotation = number("rotation", 0.0);
  if (j.contains("center")) {
    const auto c = list("center");
    if (c.size() != 2) throw ConfigError("boundary_curve.center must have two entries");
    s.center = {c[0], c[1]};
  }
  if (s.family == "disk") {
    s.radius = number("radius", 1.0);
    if (!(s.radius > 0)) throw ConfigError("disk radius must be positive");
  } else if (s.family == "ellipse") {
    s.a = number("a", 1.0);
    s.b = number("b", 1.0);
    if (!(s.a > 0 && s.b > 0)) throw ConfigError("ellipse semi-axes must be positive");
  } else if (s.family == "kite") {
    s.scale = number("scale", 1.0);
    if (!(s.scale > 0)) throw ConfigError("kite scale must be positive");
  } else if (s.family == "fourier") {
    s.cos_coeffs = list("cos");
    s.sin_coeffs = list("sin");
    if (s.cos_coeffs.empty() || !(s.cos_coeffs[0] > 0)) {
      throw ConfigError("fourier curve needs a positive mean radius cos[0]");
    }
    for (int i = 0; i < 720; ++i) {
      if (!(radial_function(s, 2.0 * std::numbers::pi * i / 720)[0] > 0)) {
        throw ConfigError("fourier curve radius must stay positive");
      }
    }
  } else {
    throw ConfigError("unknown boundary_curve family '" + s.family + "'");
  }
  return s;
}

nlohmann::json CurveSpec::to_json() const {
  nlohmann::json j = {{"family", family}};
  if (family == "disk") j["radius"] = radius;
  if (family == "ellipse") {
    j["a"] = a;
    j["b"] = b;
  }
  if (family == "kite") j["scale"] = scale;
  if (family == "fourier") {
    j["cos"] = cos_coeffs;
    j["sin"] = sin_coeffs;
  }
  if (rotation != 0.0) j["rotation"] = rotation;
  if (!center.isZero()) j["center"] = {center.x(), center.y()};
  return j;
}

Eigen::Vector2d CurveSpec::point(double t) const {
  Eigen::Vector2d p;
  const double c = std::cos(t), s = std::sin(t);
  if (family == "disk") {
    p = {radius * c, radius * s};
  } else if (family == "ellipse") {
    p = {a * c, b * s};
  } else if (family == "kite") {
    p = {scale * (c + 0.65 * std::cos(2 * t) - 0.65), scale * 1.5 * s};
  } else {
    const double r = radial_function(*this, t)[0];
    p = {r * c, r * s};
  }
  return rotation_matrix(rotation) * p + center;
}

Eigen::Vector2d CurveSpec::d1(double t) const {
  Eigen::Vector2d p;
  const double c = std::cos(t), s = std::sin(t);
  if (family == "disk") {
    p = {-radius * s, radius * c};
  } else if (family == "ellipse") {
    p = {-a * s, b * c};
  } else if (family == "kite") {
    p = {scale * (-s - 1.3 * std::sin(2 * t)), scale * 1.5 * c};
  } else {
    const auto [r, r1, r2] = radial_function(*this, t);
    p = {r1 * c - r * s, r1 * s + r * c};
  }
  return rotation_matrix(rotation) * p;
}

Eigen::Vector2d CurveSpec::d2(double t) const {
  Eigen::Vector2d p;
  const double c = std::cos(t), s = std::sin(t);
  if (family == "disk") {
    p = {-radius * c, -radius * s};
  } else if (family == "ellipse") {
    p = {-a * c, -b * s};
  } else if (family == "kite") {
    p = {scale * (-c - 2.6 * std::cos(2 * t)), -scale * 1.5 * s};
  } else {
    const auto [r, r1, r2] = radial_function(*this, t);
    p = {r2 * c - 2 * r1 * s - r * c, r2 * s + 2 * r1 * c - r * s};
  }
  return rotation_matrix(rotation) * p;
}

CurveSpec CurveSpec::rotated(double angle) const {
  CurveSpec out = *this;
  out.rotation += angle;
  out.center = rotation_matrix(angle) * center;
  return out;
}

BoundaryCurve BoundaryCurve::sample(const CurveSpec& spec, int nodes) {
  if (nodes < 8 || nodes % 2 != 0) {
    throw ConfigError("boundary node count must be even and at least 8, got " + std::to_string(nodes));
  }
  BoundaryCurve c;
  c.spec_ = spec;
  const double h = 2.0 * std::numbers::pi / nodes;
  double twice_area = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = h * i;
    const Eigen::Vector2d p = spec.point(t);
    const Eigen::Vector2d v = spec.d1(t);
    const Eigen::Vector2d acc = spec.d2(t);
    const double speed = v.norm();
    if (!(speed > 0)) throw GeometryError("boundary curve has a singular parametrization");
    const Eigen::Vector2d tangent = v / speed;
    c.params_.push_back(t);
    c.nodes_.push_back(p);
    c.tangents_.push_back(tangent);
    c.normals_.emplace_back(tangent.y(), -tangent.x());
    c.weights_.push_back(speed * h);
    c.curvature_.push_back((v.x() * acc.y() - v.y() * acc.x()) / (speed * speed * speed));
    twice_area += (p.x() - spec.center.x()) * v.y() - (p.y() - spec.center.y()) * v.x();
  }
  c.area_ = 0.5 * twice_area * h;
  if (!(c.area_ > 0)) throw GeometryError("boundary curve must be positively oriented");

  for (int i = 0; i < nodes; ++i) {
    const auto& p1 = c.nodes_[i];
    const auto& p2 = c.nodes_[(i + 1) % nodes];
    for (int j = i + 2; j < nodes; ++j) {
      if (i == 0 && j == nodes - 1) continue;
      if (segments_cross(p1, p2, c.nodes_[j], c.nodes_[(j + 1) % nodes])) {
        throw GeometryError("boundary curve self-intersects at node resolution");
      }
    }
    for (int j = i + 1; j < nodes; ++j) {
      c.diameter_ = std::max(c.diameter_, (c.nodes_[i] - c.nodes_[j]).norm());
    }
  }
  return c;
}

double BoundaryCurve::perimeter() const noexcept {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

}  // namespace ite
