#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "ite/planar.hpp"
#include "ite/radial.hpp"
#include "ite/spectra.hpp"
#include "oracle.hpp"

using namespace ite;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CurveSpec ellipse(double a = 1.0, double b = 0.8) {
  CurveSpec c;
  c.family = "ellipse";
  c.a = a;
  c.b = b;
  return c;
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<double> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

// Disk eigenvalue k J_m'(k)/J_m(k) from the oracle recurrence.
double disk_symbol(int m, double k) {
  const auto J = oracle::cyl_j_all(m + 1, k);
  return double(k * oracle::cyl_d(J, m) / J[m]);
}

}  // namespace

TEST_CASE("disk DtN matrix reproduces the Fourier symbols", "[planar]") {
  const auto curve = BoundaryCurve::sample(CurveSpec{}, 64);
  const auto G = build_dtn(curve, 1.0, 1.0);
  CHECK(G.symmetry_defect <= 1e-6);
  CHECK(G.condition_indicator >= 1.0);
  const auto ev = sorted_eigenvalues(G.entries);
  // Symbols increase with |m| at k = 1, so the lowest 17 eigenvalues are
  // m = 0 then the pairs +-1 .. +-8.
  std::vector<double> ref = {disk_symbol(0, 1.0)};
  for (int m = 1; m <= 8; ++m) {
    ref.push_back(disk_symbol(m, 1.0));
    ref.push_back(disk_symbol(m, 1.0));
  }
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CAPTURE(i);
    CHECK_THAT(ev[i], WithinAbs(ref[i], 1e-8 * std::max(1.0, std::abs(ref[i]))));
    CHECK_THAT(ev[i], WithinAbs(dtn_mode(MediumSpec::disk(1.0, 1.0, 4.0), Operator::plain, int(i + 1) / 2, 1.0).value,
                                1e-8 * std::max(1.0, std::abs(ref[i]))));
  }
}

TEST_CASE("DtN near an interior Dirichlet eigenvalue", "[planar]") {
  const auto curve = BoundaryCurve::sample(CurveSpec{}, 64);
  const double j01 = specfun::bessel_zeros(0, specfun::BesselKind::cylindrical, 3.0).at(0);
  CHECK_THROWS_AS(build_dtn(curve, j01, 1.0), ResonanceError);
  CHECK_THROWS_AS(build_dtn(curve, 10.0, 1.0), ConfigError);  // 64 < 8 k diam
  CHECK_THROWS_AS(build_dtn(curve, -1.0, 1.0), DomainError);
  try {
    build_P(curve, j01 * j01, 1.0, 4.0, 1);
    FAIL("expected ResonanceError");
  } catch (const ResonanceError& e) {
    CHECK(e.op() == Operator::plain);
  }
  try {
    build_P(curve, j01 * j01 / 4.0, 1.0, 4.0, 1);
    FAIL("expected ResonanceError");
  } catch (const ResonanceError& e) {
    CHECK(e.op() == Operator::a_n);
  }
}

TEST_CASE("constants are harmonic at vanishing wavenumber", "[planar]") {
  const auto curve = BoundaryCurve::sample(ellipse(), 64);
  const auto G = build_dtn(curve, 1e-3, 1.0);  // lambda = 1e-6
  const Eigen::VectorXd rows = G.entries * Eigen::VectorXd::Ones(curve.size());
  CHECK(rows.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("P on the disk pairs with the separable dispersion", "[planar]") {
  const auto curve = BoundaryCurve::sample(CurveSpec{}, 64);
  const auto spec = MediumSpec::disk(1.0, 1.0, 4.0);
  const SeparableModel model(spec);
  const auto c = medium_constants(spec);
  const auto P = build_P(curve, 0.5, 1.0, 4.0, 1);
  CHECK(P.symmetry_defect <= 1e-6);
  // Each mode m <= 6 shows up once for m = 0 and twice otherwise.
  const auto& ev = P.eigenvalues;
  for (int m = 0; m <= 6; ++m) {
    const double d = dispersion(model, c, m, 0.5);
    int hits = 0;
    for (int i = 0; i < ev.size(); ++i) hits += std::abs(ev(i) - d) <= 1e-7;
    CAPTURE(m, d);
    CHECK(hits == (m == 0 ? 1 : 2));
  }

  const auto same = build_P(curve, 0.5, 1.0, 1.0, 1);
  CHECK(same.matrix.cwiseAbs().maxCoeff() <= 1e-12);

  const auto flipped = build_P(curve, 0.5, 1.0, 4.0, -1);
  for (int i = 0; i < ev.size(); ++i) CHECK(flipped.eigenvalues(ev.size() - 1 - i) == -ev(i));
}

TEST_CASE("P stays symmetric on general curves", "[planar][property]") {
  CurveSpec kite;
  kite.family = "kite";
  CurveSpec fourier;
  fourier.family = "fourier";
  fourier.cos_coeffs = {1.0, 0.0, 0.1};
  fourier.sin_coeffs = {0.0, 0.0, 0.0, 0.05};
  for (const auto& spec : {CurveSpec{}, ellipse(), ellipse(1.2, 0.8), kite, fourier}) {
    const auto curve = BoundaryCurve::sample(spec, default_nodes(spec, 6.0));
    for (double lam : {0.7, 3.1, 9.0}) {
      PMatrix P;
      try {
        P = build_P(curve, lam, 1.0, 4.0, 1);
      } catch (const ResonanceError&) {
        continue;
      }
      CAPTURE(spec.family, lam);
      CHECK(P.symmetry_defect <= 1e-6);
    }
  }
}

TEST_CASE("disk sweep agrees with the separable backend", "[planar]") {
  const auto planar = planar_find_ites(CurveSpec{}, 1.0, 4.0, 0.0, 30.0, 120);
  const auto radial = find_ites(MediumSpec::disk(1.0, 1.0, 4.0), 30.0);
  REQUIRE(planar.ites.size() == radial.ites.size());
  for (std::size_t i = 0; i < radial.ites.size(); ++i) {
    CAPTURE(i, radial.ites[i].lambda);
    CHECK_THAT(planar.ites[i].lambda, WithinAbs(radial.ites[i].lambda, 1e-5));
    CHECK(planar.ites[i].multiplicity == radial.ites[i].multiplicity);
  }
  CHECK_THAT(planar.alpha, WithinRel(0.5 * std::pow(2.404825557695773, 2) / 4.0, 1e-6));
}

TEST_CASE("empty range below the first ITE", "[planar]") {
  const auto res = planar_find_ites(CurveSpec{}, 1.0, 4.0, 0.0, 1.4, 20);
  CHECK(res.ites.empty());
  CHECK(res.gaps.empty());
}

TEST_CASE("ellipse sweep is stable and rotation invariant", "[planar][property]") {
  const auto base = planar_find_ites(ellipse(), 1.0, 4.0, 0.0, 16.0, 64);
  REQUIRE(!base.ites.empty());

  const auto finer = planar_find_ites(ellipse(), 1.0, 4.0, 0.0, 16.0, 128);
  REQUIRE(finer.ites.size() == base.ites.size());
  for (std::size_t i = 0; i < base.ites.size(); ++i) {
    CHECK(std::abs(finer.ites[i].lambda - base.ites[i].lambda) < 1e-5);
    CHECK(finer.ites[i].multiplicity == base.ites[i].multiplicity);
  }

  const auto turned = planar_find_ites(ellipse().rotated(0.7), 1.0, 4.0, 0.0, 16.0, 64);
  REQUIRE(turned.ites.size() == base.ites.size());
  for (std::size_t i = 0; i < base.ites.size(); ++i) {
    CHECK(std::abs(turned.ites[i].lambda - base.ites[i].lambda) <= 1e-8);
  }
}

TEST_CASE("planar configuration errors", "[planar]") {
  CHECK_THROWS_AS(planar_find_ites(CurveSpec{}, 1.0, 1.0, 0.0, 10.0, 20), GammaZeroError);
  CHECK_THROWS_AS(planar_find_ites(CurveSpec{}, 1.0, 4.0, 0.0, 150.0, 20), ConfigError);
  CHECK_THROWS_AS(planar_find_ites(CurveSpec{}, -1.0, 4.0, 0.0, 10.0, 20), ConfigError);
}
