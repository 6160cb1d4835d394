#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace ite {

/// Named family of smooth closed planar curves, 2*pi-periodic in t and
/// positively oriented.
///
///   disk     radius
///   ellipse  a (x semi-axis), b (y semi-axis)
///   kite     scale: (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
///   fourier  star-shaped r(t) = cos[0] + sum_k cos[k] cos kt + sin[k-1] sin kt
///
/// Every family accepts an optional rigid rotation (radians) and center.
struct CurveSpec {
  std::string family = "disk";
  double radius = 1.0;
  double a = 1.0;
  double b = 1.0;
  double scale = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double rotation = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();

  static CurveSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Eigen::Vector2d point(double t) const;
  Eigen::Vector2d d1(double t) const;
  Eigen::Vector2d d2(double t) const;

  CurveSpec rotated(double angle) const;
};

/// A curve sampled at N equispaced parameter nodes with the derived
/// quadrature data. Node generation is bit-reproducible for fixed (spec, N).
class BoundaryCurve {
 public:
  static BoundaryCurve sample(const CurveSpec& spec, int nodes);

  int size() const noexcept { return static_cast<int>(params_.size()); }
  const CurveSpec& spec() const noexcept { return spec_; }

  const std::vector<double>& params() const noexcept { return params_; }
  const std::vector<Eigen::Vector2d>& nodes() const noexcept { return nodes_; }
  const std::vector<Eigen::Vector2d>& tangents() const noexcept { return tangents_; }
  const std::vector<Eigen::Vector2d>& normals() const noexcept { return normals_; }
  const std::vector<double>& weights() const noexcept { return weights_; }  ///< arc length
  const std::vector<double>& curvature() const noexcept { return curvature_; }

  double area() const noexcept { return area_; }
  double perimeter() const noexcept;
  double diameter() const noexcept { return diameter_; }

 private:
  CurveSpec spec_;
  std::vector<double> params_;
  std::vector<Eigen::Vector2d> nodes_, tangents_, normals_;
  std::vector<double> weights_, curvature_;
  double area_ = 0.0;
  double diameter_ = 0.0;
};

}  // namespace ite
