#pragma once

#include <vector>

// Bessel machinery for the separable DtN symbols.
//
// Values come from Boost.Math; derivatives are formed from the order
// recurrences, never by differencing. Log-derivatives x*f'(x)/f(x) use the
// first continued fraction, which stays finite where J itself underflows
// (evanescent modes with order >> argument).
namespace ite::specfun {

enum class BesselKind { cylindrical, spherical };

struct BesselPair {
  int order = 0;
  double argument = 0.0;
  double j = 0.0;   ///< first kind
  double y = 0.0;   ///< second kind
  double jp = 0.0;  ///< d/dx of first kind
  double yp = 0.0;  ///< d/dx of second kind
};

/// J_m, Y_m and their derivatives. Throws DomainError for order < 0 or x
/// outside [1e-8, 1e6]; OverflowError when Y leaves the representable range.
BesselPair cyl_bessel(int order, double x);

/// Spherical j_l, y_l and derivatives; same error contract as cyl_bessel.
BesselPair sph_bessel(int order, double x);

/// First-kind value only (no overflow from Y); underflows to 0 for x << m.
double cyl_j(int order, double x);
double sph_j(int order, double x);

/// x*J_m'(x)/J_m(x), finite everywhere except at zeros of J_m.
double cyl_log_derivative(int order, double x);

/// x*j_l'(x)/j_l(x).
double sph_log_derivative(int order, double x);

/// Log-derivative dispatched on kind.
double log_derivative(BesselKind kind, int order, double x);

/// Value dispatched on kind.
double first_kind(BesselKind kind, int order, double x);

/// All positive zeros of J_m (cylindrical) or j_l (spherical) in (0, upper],
/// strictly increasing, each to absolute 1e-11. Empty when upper is below the
/// first zero.
std::vector<double> bessel_zeros(int order, BesselKind kind, double upper);

/// Same, restricted to (lower, upper].
std::vector<double> bessel_zeros(int order, BesselKind kind, double lower, double upper);

}  // namespace ite::specfun
