#include "ite/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace ite {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 4>;  // w, p = a w', and their lambda-derivatives

constexpr double kPoleTolerance = 1e-10;
constexpr double kPoleMarker = 1e13;
constexpr double kSeriesLimit = 1e-6;

// x J_nu'(x)/J_nu(x) for z = x^2 small (also valid for slightly negative z).
double log_derivative_series(double nu, double z) {
  return nu - z / (2.0 * (nu + 1.0)) - z * z / (8.0 * (nu + 1.0) * (nu + 1.0) * (nu + 2.0));
}

double order_nu(specfun::BesselKind kind, int mode) {
  return kind == specfun::BesselKind::cylindrical ? mode : mode + 0.5;
}

// x f'(x)/f(x) for the first-kind function of the given kind, z = x^2.
double log_derivative_z(specfun::BesselKind kind, int mode, double z) {
  const double nu = order_nu(kind, mode);
  const double shift = kind == specfun::BesselKind::spherical ? 0.5 : 0.0;
  if (std::abs(z) < kSeriesLimit) return log_derivative_series(nu, z) - shift;
  if (z < 0) throw DomainError("symbols are evaluated for lambda > 0 only");
  return specfun::log_derivative(kind, mode, std::sqrt(z));
}

struct RawPair {
  double j, y, jp, yp;
};

// Values for the annulus cross product. Throws OverflowError when the second
// kind leaves the representable range.
RawPair raw_pair(specfun::BesselKind kind, int mode, double x) {
  const auto p = kind == specfun::BesselKind::cylindrical ? specfun::cyl_bessel(mode, x)
                                                          : specfun::sph_bessel(mode, x);
  return {p.j, p.y, p.jp, p.yp};
}

// Cross product J(x) Y(x0) - Y(x) J(x0) whose zeros in x are the annulus
// eigenvalues. When Y(x0) overflows the J(x0) term is negligible and the sign
// of -J(x) is returned (Y -> -infinity at small argument).
double cross_product(specfun::BesselKind kind, int mode, double x, double x0) {
  namespace bm = boost::math;
  const bool cyl = kind == specfun::BesselKind::cylindrical;
  const double jx = cyl ? bm::cyl_bessel_j(mode, x) : bm::sph_bessel(unsigned(mode), x);
  double y0;
  try {
    y0 = cyl ? bm::cyl_neumann(mode, x0) : bm::sph_neumann(unsigned(mode), x0);
  } catch (const std::overflow_error&) {
    return -jx;
  }
  if (!std::isfinite(y0)) return -jx;
  const double j0 = cyl ? bm::cyl_bessel_j(mode, x0) : bm::sph_bessel(unsigned(mode), x0);
  const double yx = cyl ? bm::cyl_neumann(mode, x) : bm::sph_neumann(unsigned(mode), x);
  return jx * y0 - yx * j0;
}

// Sign-scan zeros of f on (lo, hi] with the given step, refined by TOMS 748.
template <class F>
std::vector<double> scan_zeros(F f, double start, double lo, double hi, double step) {
  std::vector<double> zeros;
  double a = start;
  double fa = f(a);
  while (a < hi) {
    const double b = std::min(a + step, hi);
    const double fb = f(b);
    if (fb == 0.0) {
      if (b > lo) zeros.push_back(b);
    } else if (fa != 0.0 && (fa < 0) != (fb < 0)) {
      std::uintmax_t iters = 200;
      auto tol = [](double u, double v) { return std::abs(v - u) <= 1e-14 * std::max(1.0, std::abs(u)); };
      const auto [u, v] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
      const double z = 0.5 * (u + v);
      if (z > lo && z <= hi) zeros.push_back(z);
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

struct OdeResult {
  State x{};
  double anchor = 0.0;
  int zeros = 0;
  double max_abs = 0.0;
  std::vector<RadialPoint> samples;
};

// Integrates the radial a_n equation for one mode from the inner anchor to R.
OdeResult integrate_radial(const MediumSpec& spec, int mode, double lambda, int check_points) {
  const int d = spec.dimension;
  const double R = spec.radius();
  const double r0 = spec.obstacle_radius;
  const double L = d == 2 ? double(mode) * mode : double(mode) * (mode + 1);
  const auto& A = spec.a;
  const auto& N = spec.n;

  OdeResult out;
  State x{};
  double r;
  if (r0 > 0.0) {
    r = r0;
    x = {0.0, A.value(r0), 0.0, 0.0};
  } else {
    const double a0 = A.value(0.0);
    const double c = lambda * N.value(0.0) / a0;
    const double c_lambda = N.value(0.0) / a0;
    // alpha from the curvature of a at the origin; sampled slightly off 0
    const double probe = 1e-3 * R;
    const double alpha = A.derivative(probe) / (2.0 * probe * A.value(probe));
    const double denom = std::abs(c) + 2.0 * std::abs(alpha) * mode;
    double ra = R / 2.0;
    if (denom > 0.0) ra = std::min(ra, std::sqrt(1e-6 * (4.0 * mode + 2.0 * d) / denom));
    ra = std::max(ra, 1e-6 * R);
    const double b = -(c + 2.0 * alpha * mode) / (4.0 * mode + 2.0 * d);
    const double b_lambda = -c_lambda / (4.0 * mode + 2.0 * d);
    const double w = 1.0 + b * ra * ra;
    const double dw = mode / ra * w + 2.0 * b * ra;
    const double z = b_lambda * ra * ra;
    const double dz = mode / ra * z + 2.0 * b_lambda * ra;
    const double aa = A.value(ra);
    r = ra;
    x = {w, aa * dw, z, aa * dz};
  }
  out.anchor = r;

  auto rhs = [&](const State& s, State& ds, double rr) {
    const double a = A.value(rr);
    const double nn = N.value(rr);
    const double pot = lambda * nn - a * L / (rr * rr);
    const double damp = (d - 1) / rr;
    ds[0] = s[1] / a;
    ds[1] = -damp * s[1] - pot * s[0];
    ds[2] = s[3] / a;
    ds[3] = -damp * s[3] - pot * s[2] - nn * s[0];
  };

  std::vector<double> grid;
  if (check_points > 1) {
    for (int i = 0; i < check_points; ++i) grid.push_back(r + (R - r) * i / (check_points - 1));
    out.samples.push_back({r, x[0], x[1]});
  }
  std::size_t next = 1;

  auto stepper = odeint::make_controlled(1e-14, 1e-11, odeint::runge_kutta_dopri5<State>());
  double dt = std::min((R - r) / 64.0, std::max(r, 1e-3 * R));
  const double min_dt = 1e-14 * R;
  out.max_abs = std::abs(x[0]);
  double prev_w = x[0];
  while (r < R) {
    double target = R;
    if (next < grid.size()) target = grid[next];
    bool clipped = false;
    if (r + dt >= target) {
      dt = target - r;
      clipped = true;
    }
    const double r_before = r;
    const auto res = stepper.try_step(rhs, x, r, dt);
    if (res == odeint::fail) {
      if (dt < min_dt) {
        std::ostringstream os;
        os << "radial integration stalled at r = " << r << " (mode " << mode << ", lambda "
           << lambda << ")";
        throw StiffnessError(os.str());
      }
      continue;
    }
    if (clipped) r = target;  // land exactly on grid points and on R
    if (r > r_before) {
      const double w = x[0];
      if (prev_w != 0.0 && w != 0.0 && (w < 0) != (prev_w < 0)) ++out.zeros;
      if (w != 0.0) prev_w = w;
      out.max_abs = std::max(out.max_abs, std::abs(w));
    }
    if (next < grid.size() && r >= grid[next]) {
      out.samples.push_back({r, x[0], x[1]});
      ++next;
    }
    const double big = std::max(std::abs(x[0]), std::abs(x[1]) * R);
    if (big > 1e8) {
      for (double& v : x) v /= big;
      stepper.reset();  // the cached FSAL derivative belongs to the unscaled state
      out.max_abs /= big;
      for (auto& s : out.samples) {
        s.w /= big;
        s.p /= big;
      }
    }
  }
  out.x = x;
  return out;
}

}  // namespace

SeparableModel::SeparableModel(const MediumSpec& spec) : spec_(spec) {
  if (!spec.separable()) throw GeometryError("separable backend needs an outer radius");
  spec.validate();
  d_ = spec.dimension;
  R_ = spec.radius();
  r0_ = spec.obstacle_radius;
  kind_ = d_ == 2 ? specfun::BesselKind::cylindrical : specfun::BesselKind::spherical;
  constant_ = spec.a.is_constant() && spec.n.is_constant();
  if (constant_) {
    a_ = spec.a.constant_value();
    n_ = spec.n.constant_value();
  }
}

int SeparableModel::degeneracy(int mode) const noexcept {
  if (d_ == 2) return mode == 0 ? 1 : 2;
  return 2 * mode + 1;
}

bool SeparableModel::closed_form(Operator op) const noexcept {
  return op == Operator::plain || constant_;
}

double SeparableModel::max_wavenumber_radius(double lambda) const {
  double ratio = 1.0;
  if (constant_) {
    ratio = std::max(ratio, n_ / a_);
  } else {
    const double lo = r0_;
    for (int i = 0; i <= 256; ++i) {
      const double r = lo + (R_ - lo) * i / 256.0;
      ratio = std::max(ratio, spec_.n.value(r) / spec_.a.value(r));
    }
  }
  return std::sqrt(std::max(lambda, 0.0) * ratio) * R_;
}

double SeparableModel::an_wavenumber(double lambda) const { return std::sqrt(lambda * n_ / a_); }

double SeparableModel::plain_symbol(int mode, double lambda) const {
  return log_derivative_z(kind_, mode, lambda * R_ * R_) / R_;
}

double SeparableModel::an_closed(int mode, double lambda) const {
  if (r0_ == 0.0) return a_ * log_derivative_z(kind_, mode, lambda * R_ * R_ * n_ / a_) / R_;
  const double k = an_wavenumber(lambda);
  const double x = k * R_, x0 = k * r0_;
  try {
    const RawPair o = raw_pair(kind_, mode, x);
    const RawPair i = raw_pair(kind_, mode, x0);
    const double num = o.jp * i.y - o.yp * i.j;
    const double den = o.j * i.y - o.y * i.j;
    return a_ * k * num / den;
  } catch (const OverflowError&) {
  } catch (const DomainError&) {
  }
  // The obstacle enters with relative weight (r0/R)^(2 nu); drop it when that
  // is below double precision, otherwise integrate.
  const double nu = order_nu(kind_, mode);
  if (2.0 * nu * std::log(r0_ / R_) < std::log(1e-17)) {
    return a_ * log_derivative_z(kind_, mode, lambda * R_ * R_ * n_ / a_) / R_;
  }
  return an_ode(mode, lambda);
}

double SeparableModel::an_ode(int mode, double lambda) const {
  const OdeResult res = integrate_radial(spec_, mode, lambda, 0);
  return res.x[1] / res.x[0];
}

double SeparableModel::symbol(Operator op, int mode, double lambda) const {
  if (mode < 0) throw DomainError("mode must be nonnegative");
  if (op == Operator::plain) return plain_symbol(mode, lambda);
  return constant_ ? an_closed(mode, lambda) : an_ode(mode, lambda);
}

int SeparableModel::zero_count(int mode, double lambda) const {
  return integrate_radial(spec_, mode, lambda, 0).zeros;
}

std::vector<double> SeparableModel::poles(Operator op, int mode, double lo, double hi) const {
  lo = std::max(lo, 0.0);
  std::vector<double> out;
  if (!(hi > lo)) return out;
  const double nu = order_nu(kind_, mode);
  if (op == Operator::plain || (constant_ && r0_ == 0.0)) {
    const double scale = op == Operator::plain ? 1.0 : a_ / n_;  // lambda = (x/R)^2 * scale
    const auto xs = specfun::bessel_zeros(mode, kind_, R_ * std::sqrt(lo / scale),
                                          R_ * std::sqrt(hi / scale));
    for (double x : xs) {
      const double lam = x * x / (R_ * R_) * scale;
      if (lam > lo && lam <= hi) out.push_back(lam);
    }
    return out;
  }
  if (constant_) {
    const double scale = a_ / n_;
    const double beta = r0_ / R_;
    const double xlo = R_ * std::sqrt(lo / scale), xhi = R_ * std::sqrt(hi / scale);
    const double start = std::max({xlo, nu, 1e-8});
    if (!(xhi > start)) return out;
    auto g = [&](double x) { return cross_product(kind_, mode, x, beta * x); };
    for (double x : scan_zeros(g, start, xlo, xhi, std::numbers::pi / 8.0)) {
      const double lam = x * x / (R_ * R_) * scale;
      if (lam > lo && lam <= hi) out.push_back(lam);
    }
    return out;
  }
  const int c_lo = zero_count(mode, lo);
  const int c_hi = zero_count(mode, hi);
  for (int i = c_lo; i < c_hi; ++i) {
    const double lam = nth_eigenvalue(op, mode, i);
    if (lam > lo && lam <= hi) out.push_back(lam);
  }
  return out;
}

// Eigenvalue with zero-based index `index` of the variable-coefficient mode:
// bisection on the oscillation count, then TOMS 748 on the normalized w(R).
double SeparableModel::nth_eigenvalue(Operator, int mode, int index) const {
  double lo = 0.0;
  double hi = 1.0;
  while (zero_count(mode, hi) <= index) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw DomainError("eigenvalue search diverged");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int c = zero_count(mode, mid);
    if (c <= index) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (zero_count(mode, lo) == index && zero_count(mode, hi) == index + 1) break;
  }
  auto f = [&](double lam) {
    const OdeResult r = integrate_radial(spec_, mode, lam, 0);
    return r.x[0] / r.max_abs;
  };
  const double flo = f(lo), fhi = f(hi);
  if ((flo < 0) == (fhi < 0)) {
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (zero_count(mode, mid) <= index ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  std::uintmax_t iters = 200;
  auto tol = [](double u, double v) { return std::abs(v - u) <= 1e-13 * std::max(1.0, std::abs(u)); };
  const auto [u, v] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (u + v);
}

double SeparableModel::nearest_pole(Operator op, int mode, double lambda) const {
  if (!closed_form(op)) {
    const int c = zero_count(mode, lambda);
    double best = nth_eigenvalue(op, mode, c);
    if (c > 0) {
      const double below = nth_eigenvalue(op, mode, c - 1);
      if (lambda - below < best - lambda) best = below;
    }
    return best;
  }
  double hi = std::max(2.0 * lambda, 1.0);
  std::vector<double> ps;
  for (int it = 0; it < 60; ++it) {
    ps = poles(op, mode, 0.0, hi);
    if (!ps.empty() && ps.back() > lambda) break;
    hi *= 2.0;
  }
  double best = ps.empty() ? INFINITY : ps.front();
  for (double p : ps) {
    if (std::abs(p - lambda) < std::abs(best - lambda)) best = p;
  }
  return best;
}

double SeparableModel::symbol_at_zero(Operator op, int mode) const {
  const double l = mode;
  if (op == Operator::plain) return l / R_;
  if (constant_ && r0_ == 0.0) return a_ * l / R_;
  const OdeResult res = integrate_radial(spec_, mode, 0.0, 0);
  return res.x[1] / res.x[0];
}

double SeparableModel::slope_at_zero(Operator op, int mode) const {
  const double nu = order_nu(kind_, mode);
  if (op == Operator::plain) return -R_ / (2.0 * nu + 2.0);
  if (constant_ && r0_ == 0.0) return -n_ * R_ / (2.0 * nu + 2.0);
  const OdeResult res = integrate_radial(spec_, mode, 0.0, 0);
  const auto& x = res.x;
  return (x[3] * x[0] - x[1] * x[2]) / (x[0] * x[0]);
}

DtnSample dtn_mode(const SeparableModel& model, Operator op, int mode, double lambda) {
  if (!(lambda > 0.0) || mode < 0) {
    throw DomainError("dtn_mode needs lambda > 0 and mode >= 0");
  }
  DtnSample s;
  s.mode = mode;
  s.lambda = lambda;
  s.op = op;
  s.nearest_pole = model.nearest_pole(op, mode, lambda);
  s.distance_to_pole = std::abs(lambda - s.nearest_pole);
  if (s.distance_to_pole < kPoleTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(op) << " symbol of mode " << mode << " has a pole at lambda = " << s.nearest_pole;
    throw PoleError(os.str(), s.nearest_pole, op);
  }
  s.value = model.symbol(op, mode, lambda);
  const double a_bd = op == Operator::plain ? 1.0 : model.spec().a.value(model.radius());
  s.pole_marker = !std::isfinite(s.value) || std::abs(s.value) * model.radius() / a_bd > kPoleMarker;
  return s;
}

DtnSample dtn_mode(const MediumSpec& spec, Operator op, int mode, double lambda) {
  return dtn_mode(SeparableModel(spec), op, mode, lambda);
}

RadialSolution solve_radial(const MediumSpec& spec, int mode, double lambda, int check_points) {
  if (!spec.separable()) throw GeometryError("solve_radial needs a separable medium");
  if (mode < 0) throw DomainError("mode must be nonnegative");
  const OdeResult res = integrate_radial(spec, mode, lambda, check_points);
  RadialSolution s;
  s.mode = mode;
  s.lambda = lambda;
  s.anchor = res.anchor;
  s.zero_count = res.zeros;
  const double scale = res.max_abs > 0.0 ? res.max_abs : 1.0;
  s.w_R = res.x[0] / scale;
  s.p_R = res.x[1] / scale;
  s.dw_R = s.p_R / spec.a.value(spec.radius());
  s.samples = res.samples;
  for (auto& p : s.samples) {
    p.w /= scale;
    p.p /= scale;
  }
  return s;
}

std::vector<SpectrumEntry> dirichlet_spectrum(const SeparableModel& model, Operator op,
                                              double lambda_max) {
  std::vector<SpectrumEntry> out;
  if (!(lambda_max > 0.0)) return out;
  const MediumSpec& spec = model.spec();
  const int d = model.dimension();
  const double R = model.radius();
  // Rayleigh bound: mode eigenvalues exceed min(a)/max(n) * L / R^2.
  double ratio = 1.0;
  if (op == Operator::a_n) {
    ratio = INFINITY;
    for (int i = 0; i <= 256; ++i) {
      const double r = model.obstacle() + (R - model.obstacle()) * i / 256.0;
      ratio = std::min(ratio, spec.a.value(r) / spec.n.value(r));
    }
  }
  for (int m = 0;; ++m) {
    const double L = d == 2 ? double(m) * m : double(m) * (m + 1);
    if (m > 0 && ratio * L / (R * R) > lambda_max) break;
    for (double lam : model.poles(op, m, 0.0, lambda_max)) out.push_back({lam, m, model.degeneracy(m)});
  }
  std::sort(out.begin(), out.end(), [](const SpectrumEntry& x, const SpectrumEntry& y) {
    return x.lambda != y.lambda ? x.lambda < y.lambda : x.mode < y.mode;
  });
  return out;
}

std::vector<SpectrumEntry> dirichlet_spectrum(const MediumSpec& spec, Operator op, double lambda_max) {
  return dirichlet_spectrum(SeparableModel(spec), op, lambda_max);
}

long long count_up_to(const std::vector<SpectrumEntry>& spectrum, double lambda) {
  long long total = 0;
  for (const auto& e : spectrum) {
    if (e.lambda > lambda) break;
    total += e.degeneracy;
  }
  return total;
}

CutoffResult mode_cutoff_report(const SeparableModel& model, double lambda_max,
                                const CutoffOptions& opts) {
  if (!(lambda_max > 0.0)) throw DomainError("mode_cutoff needs lambda_max > 0");
  const double x = model.max_wavenumber_radius(lambda_max);
  int M = static_cast<int>(std::ceil(x * std::numbers::e / 2.0)) + opts.margin;

  auto verified = [&](int m) {
    if (!model.poles(Operator::plain, m, 0.0, lambda_max).empty()) return false;
    if (!model.poles(Operator::a_n, m, 0.0, lambda_max).empty()) return false;
    constexpr int samples = 512;
    int sign = 0;
    for (int i = 1; i <= samples; ++i) {
      const double t = double(i) / samples;
      const double v = model.difference(m, lambda_max * t * t);
      const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) return false;
      sign = s;
    }
    return true;
  };

  CutoffResult res;
  for (;;) {
    if (verified(M + 1) && verified(M + 2)) {
      res.modes = M;
      return res;
    }
    if (res.retries == opts.max_retries) {
      std::ostringstream os;
      os << "mode cutoff " << M << " not verified after " << res.retries << " retries (lambda_max "
         << lambda_max << ")";
      throw CutoffUnverified(os.str());
    }
    ++res.retries;
    M += std::max(10, static_cast<int>(std::ceil(x * std::numbers::e / 4.0)));
  }
}

int mode_cutoff(const MediumSpec& spec, double lambda_max, const CutoffOptions& opts) {
  return mode_cutoff_report(SeparableModel(spec), lambda_max, opts).modes;
}

}  // namespace ite
