#pragma once

#include <vector>

#include "ite/errors.hpp"
#include "ite/media.hpp"
#include "ite/specfun.hpp"

// Per-mode DtN symbols of separable media (disk, ball, optionally with a
// concentric Dirichlet obstacle). Modes are the Fourier index m >= 0 in 2D
// and the spherical degree l >= 0 in 3D; degeneracy is kept separate from
// the symbols and attached only in the event ledger.
//
// The a_n symbol is the conormal map phi -> a dv/dnu, so that F - F_{a,n}
// characterizes transmission eigenvalues.
namespace ite {

struct DtnSample {
  int mode = 0;
  double lambda = 0.0;
  double value = 0.0;
  bool pole_marker = false;  ///< |log-derivative| beyond 1e13
  double distance_to_pole = 0.0;
  double nearest_pole = 0.0;
  Operator op = Operator::plain;
};

struct RadialPoint {
  double r, w, p;  ///< p = a(r) w'(r)
};

struct RadialSolution {
  int mode = 0;
  double lambda = 0.0;
  double anchor = 0.0;  ///< starting radius of the integration
  double w_R = 0.0;     ///< w(R), with max |w| on [anchor, R] scaled to 1
  double dw_R = 0.0;    ///< w'(R)
  double p_R = 0.0;     ///< a(R) w'(R)
  int zero_count = 0;   ///< sign changes of w in (anchor, R)
  std::vector<RadialPoint> samples;  ///< uniform check grid when requested

  double conormal_ratio() const { return p_R / w_R; }
};

struct SpectrumEntry {
  double lambda;
  int mode;
  int degeneracy;
};

/// Evaluation engine for one separable medium. Cheap to copy; all methods
/// are const and thread-safe.
class SeparableModel {
 public:
  explicit SeparableModel(const MediumSpec& spec);

  const MediumSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return d_; }
  double radius() const noexcept { return R_; }
  double obstacle() const noexcept { return r0_; }
  specfun::BesselKind kind() const noexcept { return kind_; }

  /// 1 for m = 0 and 2 otherwise in 2D; 2l+1 in 3D.
  int degeneracy(int mode) const noexcept;

  /// True when the symbol has a Bessel closed form (always for plain).
  bool closed_form(Operator op) const noexcept;

  /// Largest wavenumber-radius product kR reached at lambda by either family.
  double max_wavenumber_radius(double lambda) const;

  /// Raw symbol value; very large near poles and never throws PoleError.
  double symbol(Operator op, int mode, double lambda) const;

  /// sigma-free difference F - F_{a,n}.
  double difference(int mode, double lambda) const {
    return symbol(Operator::plain, mode, lambda) - symbol(Operator::a_n, mode, lambda);
  }

  /// Dirichlet eigenvalues of the mode in (lo, hi], increasing.
  std::vector<double> poles(Operator op, int mode, double lo, double hi) const;

  /// Nearest Dirichlet eigenvalue of the mode to lambda.
  double nearest_pole(Operator op, int mode, double lambda) const;

  double symbol_at_zero(Operator op, int mode) const;
  double slope_at_zero(Operator op, int mode) const;

 private:
  double plain_symbol(int mode, double lambda) const;
  double an_closed(int mode, double lambda) const;
  double an_ode(int mode, double lambda) const;
  double an_wavenumber(double lambda) const;  // sqrt(lambda n / a) for constants
  int zero_count(int mode, double lambda) const;
  double nth_eigenvalue(Operator op, int mode, int index) const;

  MediumSpec spec_;
  int d_;
  double R_, r0_;
  specfun::BesselKind kind_;
  bool constant_;
  double a_ = 1.0, n_ = 1.0;
};

/// DtN sample with pole distance; PoleError within 1e-10 of a mode
/// eigenvalue, GeometryError for non-separable media.
DtnSample dtn_mode(const MediumSpec& spec, Operator op, int mode, double lambda);
DtnSample dtn_mode(const SeparableModel& model, Operator op, int mode, double lambda);

/// Radial solution of the a_n equation for the mode, anchored by a two-term
/// series near the origin (no obstacle) or by w(r0) = 0, p(r0) = a(r0).
/// `check_points` > 1 requests samples on a uniform grid over [anchor, R].
RadialSolution solve_radial(const MediumSpec& spec, int mode, double lambda, int check_points = 0);

/// All Dirichlet eigenvalues <= lambda_max, sorted by (lambda, mode).
std::vector<SpectrumEntry> dirichlet_spectrum(const MediumSpec& spec, Operator op, double lambda_max);
std::vector<SpectrumEntry> dirichlet_spectrum(const SeparableModel& model, Operator op,
                                              double lambda_max);

/// Degeneracy-weighted count of entries <= lambda.
long long count_up_to(const std::vector<SpectrumEntry>& spectrum, double lambda);

struct CutoffOptions {
  int margin = 10;
  int max_retries = 3;
};

struct CutoffResult {
  int modes = 0;    ///< highest mode needed
  int retries = 0;  ///< failed verification scans before success
};

/// Highest mode with poles or dispersion zeros below lambda_max:
/// ceil(x e / 2) + margin with x = max(kR, k_n R), verified by a sign scan of
/// modes M+1 and M+2. Raises M by max(10, ceil(x e / 4)) after a failed scan;
/// CutoffUnverified once the retries are exhausted.
CutoffResult mode_cutoff_report(const SeparableModel& model, double lambda_max,
                                const CutoffOptions& opts = {});
int mode_cutoff(const MediumSpec& spec, double lambda_max, const CutoffOptions& opts = {});

}  // namespace ite
