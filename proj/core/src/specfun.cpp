#include "ite/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ite/errors.hpp"

namespace ite::specfun {

namespace {

constexpr double kMinArgument = 1e-8;
constexpr double kMaxArgument = 1e6;
constexpr double kZeroTolerance = 1e-11;

void check_domain(int order, double x, const char* who) {
  if (order < 0 || !(x >= kMinArgument && x <= kMaxArgument)) {
    std::ostringstream os;
    os << who << ": order " << order << ", argument " << x
       << " outside order >= 0, x in [1e-8, 1e6]";
    throw DomainError(os.str());
  }
}

[[noreturn]] void overflow(const char* who, int order, double x) {
  std::ostringstream os;
  os << who << ": second-kind value out of range at order " << order << ", x = " << x;
  throw OverflowError(os.str());
}

double j_cyl(int m, double x) { return boost::math::cyl_bessel_j(m, x); }
double y_cyl(int m, double x) { return boost::math::cyl_neumann(m, x); }
double j_sph(int l, double x) { return boost::math::sph_bessel(static_cast<unsigned>(l), x); }
double y_sph(int l, double x) { return boost::math::sph_neumann(static_cast<unsigned>(l), x); }

// J_nu'(x)/J_nu(x) by the modified Lentz evaluation of the first continued
// fraction. Needs roughly max(x, 10) terms.
double cf1_ratio(double nu, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  double h = nu * xi;
  if (std::fabs(h) < tiny) h = tiny;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  const int max_iter = 20000 + static_cast<int>(2.0 * x);
  for (int i = 1; i <= max_iter; ++i) {
    b += xi2;
    d = b - d;
    if (std::fabs(d) < tiny) d = tiny;
    c = b - 1.0 / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) return h;
  }
  std::ostringstream os;
  os << "continued fraction did not converge for nu = " << nu << ", x = " << x;
  throw DomainError(os.str());
}

}  // namespace

BesselPair cyl_bessel(int order, double x) {
  check_domain(order, x, "cyl_bessel");
  BesselPair p;
  p.order = order;
  p.argument = x;
  try {
    p.j = j_cyl(order, x);
    p.y = y_cyl(order, x);
    if (order == 0) {
      p.jp = -j_cyl(1, x);
      p.yp = -y_cyl(1, x);
    } else {
      const double ratio = static_cast<double>(order) / x;
      p.jp = j_cyl(order - 1, x) - ratio * p.j;
      p.yp = y_cyl(order - 1, x) - ratio * p.y;
    }
  } catch (const std::overflow_error&) {
    overflow("cyl_bessel", order, x);
  }
  if (!std::isfinite(p.y) || !std::isfinite(p.yp) || p.j == 0.0) overflow("cyl_bessel", order, x);
  return p;
}

BesselPair sph_bessel(int order, double x) {
  check_domain(order, x, "sph_bessel");
  BesselPair p;
  p.order = order;
  p.argument = x;
  try {
    p.j = j_sph(order, x);
    p.y = y_sph(order, x);
    if (order == 0) {
      p.jp = -j_sph(1, x);
      p.yp = -y_sph(1, x);
    } else {
      const double ratio = static_cast<double>(order + 1) / x;
      p.jp = j_sph(order - 1, x) - ratio * p.j;
      p.yp = y_sph(order - 1, x) - ratio * p.y;
    }
  } catch (const std::overflow_error&) {
    overflow("sph_bessel", order, x);
  }
  if (!std::isfinite(p.y) || !std::isfinite(p.yp) || p.j == 0.0) overflow("sph_bessel", order, x);
  return p;
}

double cyl_j(int order, double x) {
  check_domain(order, x, "cyl_j");
  return j_cyl(order, x);
}

double sph_j(int order, double x) {
  check_domain(order, x, "sph_j");
  return j_sph(order, x);
}

double cyl_log_derivative(int order, double x) {
  check_domain(order, x, "cyl_log_derivative");
  return x * cf1_ratio(static_cast<double>(order), x);
}

double sph_log_derivative(int order, double x) {
  check_domain(order, x, "sph_log_derivative");
  // j_l = sqrt(pi/(2x)) J_{l+1/2}
  return x * cf1_ratio(order + 0.5, x) - 0.5;
}

double log_derivative(BesselKind kind, int order, double x) {
  return kind == BesselKind::cylindrical ? cyl_log_derivative(order, x)
                                         : sph_log_derivative(order, x);
}

double first_kind(BesselKind kind, int order, double x) {
  return kind == BesselKind::cylindrical ? cyl_j(order, x) : sph_j(order, x);
}

std::vector<double> bessel_zeros(int order, BesselKind kind, double upper) {
  return bessel_zeros(order, kind, 0.0, upper);
}

std::vector<double> bessel_zeros(int order, BesselKind kind, double lower, double upper) {
  if (order < 0) throw DomainError("bessel_zeros: negative order");
  std::vector<double> zeros;
  // No zeros below the turning point nu.
  const double nu = kind == BesselKind::cylindrical ? order : order + 0.5;
  const double start = std::max({lower, nu, kMinArgument});
  if (!(upper > start)) return zeros;

  auto f = [&](double x) { return first_kind(kind, order, x); };
  auto fprime = [&](double x) {
    if (kind == BesselKind::cylindrical) {
      return order == 0 ? -j_cyl(1, x) : j_cyl(order - 1, x) - order / x * j_cyl(order, x);
    }
    return order == 0 ? -j_sph(1, x) : j_sph(order - 1, x) - (order + 1) / x * j_sph(order, x);
  };

  auto refine = [&](double a, double fa, double b) {
    while (b - a > kZeroTolerance) {
      const double mid = 0.5 * (a + b);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0) == (fa < 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    double x = 0.5 * (a + b);
    const double dp = fprime(x);
    if (dp != 0.0) {
      const double polished = x - f(x) / dp;
      if (polished >= a - kZeroTolerance && polished <= b + kZeroTolerance) x = polished;
    }
    return x;
  };

  const double step = std::numbers::pi / 8.0;
  double a = start;
  double fa = f(a);
  while (a < upper) {
    const double b = std::min(a + step, upper);
    const double fb = f(b);
    if (fb == 0.0) {
      if (b > lower) zeros.push_back(b);
    } else if (fa != 0.0 && (fa < 0) != (fb < 0)) {
      const double z = refine(a, fa, b);
      if (z > lower && z <= upper) zeros.push_back(z);
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace ite::specfun
