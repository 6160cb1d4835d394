#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ite/radial.hpp"
#include "ite/spectra.hpp"
#include "oracle.hpp"

using namespace ite;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

double j01() { return specfun::bessel_zeros(0, specfun::BesselKind::cylindrical, 3.0).at(0); }

// k J_m'(k R) / J_m(k R) from the ascending series.
double plain_oracle(int m, double lambda) {
  const double k = std::sqrt(lambda);
  const double d = m == 0 ? -oracle::series_j(1, k) : 0.5 * (oracle::series_j(m - 1, k) - oracle::series_j(m + 1, k));
  return k * d / oracle::series_j(m, k);
}

}  // namespace

TEST_CASE("plain symbol of the unit disk", "[radial]") {
  const auto disk = MediumSpec::disk(1.0, 1.0, 4.0);
  const auto s = dtn_mode(disk, Operator::plain, 0, 1.0);
  CHECK_THAT(s.value, WithinRel(-0.5750812, 1e-6));
  CHECK_THAT(s.value, WithinRel(plain_oracle(0, 1.0), 1e-12));
  CHECK_FALSE(s.pole_marker);
  CHECK_THAT(s.nearest_pole, WithinRel(j01() * j01(), 1e-12));
  for (int m : {1, 3, 7}) {
    for (double lam : {0.3, 2.0, 9.5, 40.0}) {
      CAPTURE(m, lam);
      CHECK_THAT(dtn_mode(disk, Operator::plain, m, lam).value, WithinRel(plain_oracle(m, lam), 1e-10));
    }
  }
}

TEST_CASE("pole errors", "[radial]") {
  const auto disk = MediumSpec::disk(1.0, 1.0, 4.0);
  try {
    dtn_mode(disk, Operator::plain, 0, j01() * j01());
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK_THAT(e.pole(), WithinRel(j01() * j01(), 1e-13));
    CHECK(e.op() == Operator::plain);
  }
  CHECK_THROWS_AS(dtn_mode(MediumSpec::ball(1.0, 1.0, 4.0), Operator::plain, 0, pi * pi), PoleError);
  CHECK_THROWS_AS(dtn_mode(disk, Operator::a_n, 0, j01() * j01() / 4.0), PoleError);
  CHECK_THROWS_AS(dtn_mode(disk, Operator::plain, -1, 1.0), DomainError);
  CHECK_THROWS_AS(dtn_mode(disk, Operator::plain, 0, 0.0), DomainError);
  CHECK_THROWS_AS(SeparableModel(MediumSpec::planar(CurveSpec{}, 1.0, 4.0)), GeometryError);
}

TEST_CASE("identical media give identical symbols", "[radial]") {
  const auto same = MediumSpec::disk(1.0, 1.0, 1.0);
  for (int m : {0, 2, 9}) {
    for (double lam : {0.5, 7.0, 33.0}) {
      CHECK(dtn_mode(same, Operator::a_n, m, lam).value == dtn_mode(same, Operator::plain, m, lam).value);
    }
  }
}

TEST_CASE("conormal medium symbol with an obstacle", "[radial]") {
  // a v'/v at r = 1 with v the Dirichlet-at-r0 combination.
  const auto annulus = MediumSpec::disk(1.0, 1.0, 0.5, 0.3);
  for (int m : {0, 1, 4}) {
    for (double lam : {3.0, 17.0, 45.0}) {
      const double q = std::sqrt(lam * 0.5);
      const auto J = oracle::cyl_j_all(m + 1, q), Y = oracle::cyl_y_all(m + 1, q);
      const auto J0 = oracle::cyl_j_all(m + 1, 0.3 * q), Y0 = oracle::cyl_y_all(m + 1, 0.3 * q);
      const double v = double(J[m] * Y0[m] - Y[m] * J0[m]);
      const double dv = double(q * (oracle::cyl_d(J, m) * Y0[m] - oracle::cyl_d(Y, m) * J0[m]));
      CAPTURE(m, lam);
      CHECK_THAT(dtn_mode(annulus, Operator::a_n, m, lam).value, WithinRel(dv / v, 1e-9));
    }
  }
}

TEST_CASE("radial ODE reproduces the closed forms", "[radial][property]") {
  // 200-point (mode, lambda) grid for each constant medium.
  const std::vector<MediumSpec> media = {MediumSpec::disk(1.0, 1.0, 4.0), MediumSpec::disk(1.0, 4.0, 1.0),
                                         MediumSpec::disk(1.0, 1.0, 0.5, 0.3), MediumSpec::ball(1.0, 1.0, 4.0)};
  for (const auto& spec : media) {
    const SeparableModel model(spec);
    int compared = 0;
    for (int m = 0; m < 10; ++m) {
      for (int i = 0; i < 20; ++i) {
        const double lam = 0.4 + 3.0 * i;
        const double closed = model.symbol(Operator::a_n, m, lam);
        if (std::abs(closed) > 1e4) continue;  // pole neighbourhood, relative comparison meaningless
        const auto sol = solve_radial(spec, m, lam);
        CAPTURE(spec.to_json().dump(), m, lam);
        CHECK_THAT(sol.conormal_ratio(), WithinAbs(closed, 1e-8 * std::max(1.0, std::abs(closed))));
        ++compared;
      }
    }
    CHECK(compared > 180);
  }
}

TEST_CASE("radial solution profile", "[radial]") {
  const auto disk = MediumSpec::disk(1.0, 1.0, 4.0);
  const auto sol = solve_radial(disk, 2, 5.0, 41);
  REQUIRE(sol.samples.size() == 41);
  // w is proportional to J_2(2 sqrt(5) r); compare after matching at r = R.
  const double q = 2.0 * std::sqrt(5.0);
  const double scale = sol.w_R / std::cyl_bessel_j(2.0, q);
  double worst = 0.0;
  for (const auto& p : sol.samples) {
    worst = std::max(worst, std::abs(p.w - scale * std::cyl_bessel_j(2.0, q * p.r)));
  }
  CHECK(worst < 1e-8);

  const auto flat = solve_radial(disk, 0, 1e-9);
  CHECK(std::abs(flat.dw_R) < 1e-7);

  const auto annulus = MediumSpec::disk(1.0, 1.0, 0.5, 0.3);
  const auto a = solve_radial(annulus, 3, 10.0, 11);
  CHECK(a.anchor == 0.3);
  CHECK(a.samples.front().w == 0.0);
}

TEST_CASE("plain symbol decreases between poles", "[radial][property]") {
  const SeparableModel model(MediumSpec::disk(1.0, 1.0, 4.0));
  for (int m : {0, 1, 5}) {
    const auto poles = model.poles(Operator::plain, m, 0.0, 200.0);
    std::vector<double> edges = {1e-3};
    edges.insert(edges.end(), poles.begin(), poles.end());
    edges.push_back(200.0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double lo = edges[i] + 1e-6, hi = edges[i + 1] - 1e-6;
      double prev = model.symbol(Operator::plain, m, lo);
      for (int j = 1; j <= 200; ++j) {
        const double v = model.symbol(Operator::plain, m, lo + (hi - lo) * j / 200.0);
        REQUIRE(v < prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("Dirichlet spectra", "[radial]") {
  const auto disk = MediumSpec::disk(1.0, 1.0, 4.0);
  const double z0 = j01() * j01();
  const auto s6 = dirichlet_spectrum(disk, Operator::plain, 6.0);
  REQUIRE(s6.size() == 1);
  CHECK_THAT(s6[0].lambda, WithinRel(z0, 1e-12));
  CHECK(s6[0].mode == 0);
  CHECK(s6[0].degeneracy == 1);

  const auto s15 = dirichlet_spectrum(disk, Operator::plain, 15.0);
  REQUIRE(s15.size() == 2);
  CHECK_THAT(s15[1].lambda, WithinRel(3.8317059702075123 * 3.8317059702075123, 1e-12));
  CHECK(s15[1].degeneracy == 2);
  CHECK(count_up_to(s15, 15.0) == 3);

  const auto an = dirichlet_spectrum(disk, Operator::a_n, z0 / 4.0 + 1e-9);
  REQUIRE(an.size() == 1);
  CHECK_THAT(an[0].lambda, WithinRel(z0 / 4.0, 1e-12));

  const auto ball = dirichlet_spectrum(MediumSpec::ball(1.0, 1.0, 4.0), Operator::plain, 40.0);
  REQUIRE(!ball.empty());
  CHECK_THAT(ball[0].lambda, WithinRel(pi * pi, 1e-12));
  for (const auto& e : ball) CHECK(e.degeneracy == 2 * e.mode + 1);
}

TEST_CASE("medium spectrum scales with a / n", "[radial][property]") {
  for (auto [a, n] : {std::pair{1.0, 4.0}, std::pair{4.0, 1.0}, std::pair{2.5, 0.7}}) {
    const auto spec = MediumSpec::disk(1.0, a, n);
    const auto plain = dirichlet_spectrum(spec, Operator::plain, 300.0);
    const auto an = dirichlet_spectrum(spec, Operator::a_n, 300.0 * a / n);
    REQUIRE(plain.size() == an.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
      CHECK_THAT(an[i].lambda, WithinRel(plain[i].lambda * a / n, 1e-12));
      CHECK(an[i].mode == plain[i].mode);
    }
  }
}

TEST_CASE("ODE spectrum of a variable medium agrees with its sign changes", "[radial]") {
  auto spec = MediumSpec::disk(1.0, 1.0, 1.0);
  spec.n = CoefficientProfile::radial("gaussian_bump", {{"base", 3.0}, {"amplitude", 1.0}, {"width", 0.4}});
  const SeparableModel model(spec);
  for (int m : {0, 2}) {
    const auto poles = model.poles(Operator::a_n, m, 0.0, 80.0);
    REQUIRE(!poles.empty());
    for (double p : poles) {
      // w(R) changes sign across each pole
      const double lo = solve_radial(spec, m, p * (1 - 1e-6)).w_R;
      const double hi = solve_radial(spec, m, p * (1 + 1e-6)).w_R;
      CAPTURE(m, p);
      CHECK((lo < 0) != (hi < 0));
    }
  }
}

TEST_CASE("Dirichlet Weyl law on the disk", "[radial]") {
  const auto spec = MediumSpec::disk(1.0, 1.0, 4.0);
  const double lam = 4000.0;
  const long long N = count_up_to(dirichlet_spectrum(spec, Operator::plain, lam), lam);
  CHECK(std::abs(N / (lam / 4.0) - 1.0) <= 0.05);
}

TEST_CASE("mode cutoff", "[radial]") {
  const auto disk = MediumSpec::disk(1.0, 1.0, 4.0);
  CHECK(mode_cutoff(disk, 100.0) >= 38);
  CHECK(mode_cutoff(disk, 0.5) >= 10);

  // Weak conormal contrast: the curves of modes just above the margin-free
  // estimate still cross zero below lambda_max, so the first scan fails.
  const auto tricky = MediumSpec::disk(1.0, 1.2, 4.0);
  const SeparableModel model(tricky);
  const auto retried = mode_cutoff_report(model, 400.0, CutoffOptions{0, 3});
  CHECK(retried.retries == 1);
  CHECK(mode_cutoff_report(model, 400.0).retries == 0);
  CHECK_THROWS_AS(mode_cutoff_report(model, 400.0, CutoffOptions{0, 0}), CutoffUnverified);
}
