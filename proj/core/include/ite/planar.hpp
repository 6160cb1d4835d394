#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ite/curve.hpp"
#include "ite/errors.hpp"

// DtN matrices of smooth planar domains by fundamental-solution collocation
// (constant coefficients, no obstacle), the difference matrix P(lambda) and
// a lambda sweep for its kernel.
//
// Boundary data live in the span of the trigonometric interpolants through
// the N nodes. The interior solve and the arc-length inner products run on an
// oversampled grid of `oversampling * N` nodes, so the weighted DtN matrix is
// a Galerkin matrix and stays symmetric on curved boundaries; plain nodal
// collocation aliases the top Fourier modes there.
namespace ite {

struct PlanarOptions {
  int nodes = 0;                 ///< 0: smallest even N >= max(64, 8 k diam)
  double offset_factor = 6.0;    ///< source offset in local spacings of the fine grid
  int oversampling = 2;          ///< fine quadrature nodes per boundary node
  double svd_cutoff = 1e-12;     ///< relative singular value truncation
  double resonance_tol = 1e-8;   ///< Dirichlet-solve residual threshold
  double lambda_cap = 100.0;
  double lambda_tol = 1e-6;      ///< bracket width before regula falsi
  double cluster_tol = 1e-5;
  double pole_window = 1e-6;     ///< relative half-width skipped around resonances in k
};

struct DtnMatrix {
  double lambda = 0.0;
  double wavenumber = 0.0;
  double conormal_scale = 1.0;
  Eigen::MatrixXd entries;       ///< boundary values -> conormal derivatives (projected onto the nodal space)
  Eigen::MatrixXd weighted;      ///< L^{-1} G L^{-T}, G the Galerkin matrix and L L^T the arc-length mass
  double condition_indicator = 0.0;
  double residual = 0.0;         ///< relative least-squares defect of the interpolated data
  double symmetry_defect = 0.0;  ///< of `weighted`
  int retained = 0;
};

/// ResonanceError (operator tagged by the caller) near interior Dirichlet
/// eigenvalues, IllConditioned when fewer than N/2 singular values survive,
/// ConfigError when N < 8 k diam.
DtnMatrix build_dtn(const BoundaryCurve& curve, double wavenumber, double conormal_scale,
                    const PlanarOptions& opts = {});

struct PMatrix {
  double lambda = 0.0;
  Eigen::MatrixXd matrix;       ///< symmetrized, arc-length weighted
  Eigen::VectorXd eigenvalues;  ///< ascending
  double symmetry_defect = 0.0;
};

/// sigma (G - G_{a,n}) with G_{a,n} at wavenumber sqrt(lambda n / a) and
/// conormal scale a.
PMatrix build_P(const BoundaryCurve& curve, double lambda, double a, double n, int sigma,
                const PlanarOptions& opts = {});

/// Subspace-angle indicator of the interior Dirichlet problem: near 0 at
/// Dirichlet eigenvalues k^2, O(1) elsewhere.
double dirichlet_indicator(const BoundaryCurve& curve, double wavenumber,
                           const PlanarOptions& opts = {});

/// Dirichlet eigenvalues of the domain (as lambda = k^2) up to lambda_max,
/// located as minima of the indicator.
std::vector<double> planar_dirichlet_eigenvalues(const BoundaryCurve& curve, double lambda_max,
                                                 const PlanarOptions& opts = {});

struct PlanarIte {
  double lambda;
  int multiplicity;
};

struct GapInterval {
  double lo, hi;
  std::string op;  ///< "plain", "a_n" or "both"
};

struct PlanarResult {
  int nodes = 0;
  double alpha = 0.0;  ///< lower end of the sweep actually used
  std::vector<PlanarIte> ites;
  std::vector<GapInterval> gaps;
  std::vector<double> plain_poles, an_poles;
  std::vector<std::string> notes;
};

int default_nodes(const CurveSpec& curve, double max_wavenumber, const PlanarOptions& opts = {});

/// Sweeps (lo, hi] with `coarse_steps` uniform steps, skipping resonance
/// windows, and refines every sign change of the ordered eigenvalues of P.
/// lo <= 0 selects half the smaller first Dirichlet eigenvalue of the two
/// operators.
/// TrackingLost when the ordered spectrum jumps without a located resonance.
PlanarResult planar_find_ites(const CurveSpec& curve, double a, double n, double lo, double hi,
                              int coarse_steps, const PlanarOptions& opts = {});

}  // namespace ite
