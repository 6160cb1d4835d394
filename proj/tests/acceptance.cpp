// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Tolerances are pinned here, reference constants come from closed forms.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ite/planar.hpp"
#include "ite/radial.hpp"
#include "ite/report.hpp"
#include "ite/spectra.hpp"
#include "oracle.hpp"

using namespace ite;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void verdict(int id, bool ok, const std::string& what, double seconds) {
  std::printf("[%s] %d %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Canonical {
  const char* name;
  MediumSpec spec;
  oracle::Medium md;
  int sigma;
  double exponent_bound;  // d/2 - delta + 0.15
};

std::vector<Canonical> canonical() {
  return {{"disk n=4", MediumSpec::disk(1.0, 1.0, 4.0), {2, 1.0, 4.0, 0.0}, 1, 1.0 - 0.25 + 0.15},
          {"ball n=4", MediumSpec::ball(1.0, 1.0, 4.0), {3, 1.0, 4.0, 0.0}, 1, 1.5 - 1.0 / 6.0 + 0.15},
          {"annulus r0=0.3 n=0.5", MediumSpec::disk(1.0, 1.0, 0.5, 0.3), {2, 1.0, 0.5, 0.3}, -1, 1.0 - 0.25 + 0.15},
          {"disk a=4", MediumSpec::disk(1.0, 4.0, 1.0), {2, 4.0, 1.0, 0.0}, -1, 1.0 - 1.0 / 3.0 + 0.15}};
}

// Least-squares slope of log y against log x over the points with lo <= x <= hi.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo * (1 - 1e-12) || x[i] > hi * (1 + 1e-12) || !(y[i] > 0)) continue;
    const double u = std::log(x[i]), v = std::log(y[i]);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double lam = 4000.0;
  const long long N = count_up_to(dirichlet_spectrum(MediumSpec::disk(1.0, 1.0, 4.0), Operator::plain, lam), lam);
  const double dev = std::abs(N / (lam / (4.0 * pi) * pi) - 1.0);
  const double t = since(t0);
  verdict(1, dev <= 0.05 && t < 10.0,
          fmt("Dirichlet Weyl law on the unit disk: N(4000) = %.0f, |ratio - 1| = %.4f (<= 0.05), runtime < 10 s",
              double(N), dev),
          t);
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* name;
    MediumSpec spec;
    double coeff, slope, slope_tol;
  };
  const std::vector<Case> cases = {
      {"disk", MediumSpec::disk(1.0, 1.0, 4.0), 0.75, 1.0, 0.05},
      {"ball", MediumSpec::ball(1.0, 1.0, 4.0), std::abs(4.0 * pi / 3.0 * (1.0 - 8.0)) / (6.0 * pi * pi), 1.5, 0.07}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto run = find_ites(c.spec, 2000.0);
    const auto& r = run.report;
    double min_ratio = INFINITY;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      if (r.grid[i] < 200.0 * (1 - 1e-12)) continue;
      min_ratio = std::min(min_ratio, r.N_T[i] / (c.coeff * std::pow(r.grid[i], c.spec.dimension / 2.0)));
      x.push_back(r.grid[i]);
      y.push_back(double(r.N_T[i]));
    }
    const double slope = loglog_slope(x, y, 200.0, 2000.0);
    const bool good = min_ratio >= 0.9 && std::abs(slope - c.slope) <= c.slope_tol;
    ok = ok && good;
    detail += std::string(" ") + c.name +
              fmt(": min ratio %.4f (>= 0.9), slope %.4f (%.2f +- %.2f);", min_ratio, slope, c.slope, c.slope_tol);
  }
  verdict(2, ok, "ITE counting lower bound on [200, 2000]:" + detail, since(t0));
}

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  long long points = 0;
  for (const auto& c : canonical()) {
    const auto run = find_ites(c.spec, 2000.0);
    const auto& r = run.report;
    ok = ok && r.constants.sigma == c.sigma;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      ok = ok && r.n_minus[i] - r.n_minus_alpha == r.n1[i] + r.n2[i];
      ok = ok && r.N_T[i] >= std::llabs(r.n2[i]) + r.R_sing[i];
      ok = ok && std::llabs(r.n1[i] - c.sigma * (r.N_an[i] - r.N[i])) <= r.R_sing[i];
      ++points;
    }
  }
  verdict(3, ok, fmt("accounting identities exact on %.0f grid points of the four canonical runs", double(points)),
          since(t0));
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const auto& c : canonical()) {
    const double lmax = 2000.0;
    const auto run = find_ites(c.spec, lmax);
    const auto& r = run.report;
    std::vector<double> y(r.n_minus.begin(), r.n_minus.end());
    const double e = loglog_slope(r.grid, y, lmax / 10.0, lmax);
    const bool good = e <= c.exponent_bound;
    ok = ok && good;
    detail += std::string(" ") + c.name + fmt(": %.3f (<= %.3f);", e, c.exponent_bound);
  }
  verdict(4, ok, "n_minus growth exponent on the top decade:" + detail, since(t0));
}

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  const std::vector<std::pair<const char*, MediumSpec>> disks = {{"disk n=4", MediumSpec::disk(1.0, 1.0, 4.0)},
                                                                 {"disk a=4", MediumSpec::disk(1.0, 4.0, 1.0)},
                                                                 {"annulus", MediumSpec::disk(1.0, 1.0, 0.5, 0.3)}};
  for (const auto& [name, spec] : disks) {
    const SeparableModel model(spec);
    const auto est = operator_estimate_check(model, log_grid(10.0, 1000.0, 16), 200, 24, 1e-2);
    double c1[2] = {0, 0}, c2[2] = {0, 0};
    int near = 0;
    for (const auto& s : est.samples) {
      const int dec = s.lambda >= 100.0 * (1 - 1e-12) ? 1 : 0;
      c1[dec] = std::max(c1[dec], s.c1);
      c2[dec] = std::max(c2[dec], s.c2);
      near += s.near_pole;
    }
    const bool good = c1[1] <= 2.0 * c1[0] && c2[1] <= 2.0 * c2[0] && near > 0;
    ok = ok && good;
    detail += std::string(" ") + name +
              fmt(": C1 %.4f -> %.4f, C2 %.4f -> %.4f;", c1[0], c1[1], c2[0], c2[1]);
  }
  verdict(5, ok, "operator estimates decade-stable (modes <= 200, lambda <= 1000, near-pole distance 1e-2):" + detail,
          since(t0));
}

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const auto& c : canonical()) {
    const auto run = find_ites(c.spec, 60.0);
    const auto ref = oracle::group(oracle::determinant_roots(c.md, run.alpha, 60.0, run.scan.mode_cutoff));
    bool good = run.ites.size() == ref.size();
    double worst = 0.0;
    for (std::size_t i = 0; good && i < ref.size(); ++i) {
      worst = std::max(worst, std::abs(run.ites[i].lambda - ref[i].lambda));
      good = run.ites[i].multiplicity == ref[i].multiplicity;
    }
    good = good && worst <= 1e-7;
    ok = ok && good;
    detail += std::string(" ") + c.name + fmt(": %.0f ITEs, max diff %.1e;", double(ref.size()), worst);
  }
  verdict(6, ok, "find_ites matches the determinant oracle on (alpha, 60] to 1e-7 with exact multiplicities:" + detail, since(t0));
}

// Largest distance between `target` and the crossings of P's ordered
// eigenvalues in [target - h, target + h] at N nodes.
double planar_error(double target, int multiplicity, int N) {
  const double h = 1e-3;
  const auto curve = BoundaryCurve::sample(CurveSpec{}, N);
  auto eig = [&](double lam) { return build_P(curve, lam, 1.0, 4.0, 1).eigenvalues; };
  const auto lo = eig(target - h), hi = eig(target + h);
  const int nl = int((lo.array() < 0).count()), nh = int((hi.array() < 0).count());
  if (std::abs(nl - nh) != multiplicity) return INFINITY;
  double worst = 0.0;
  for (int idx = std::min(nl, nh); idx < std::max(nl, nh); ++idx) {
    double a = target - h, b = target + h, fa = lo(idx), fb = hi(idx);
    int side = 0;
    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
      const double c = (a * fb - b * fa) / (fb - fa);
      const double fc = eig(c)(idx);
      if (fc == 0.0) {
        a = b = c;
        break;
      }
      if ((fc < 0) == (fa < 0)) {
        a = c;
        fa = fc;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        b = c;
        fb = fc;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
    }
    const double root = std::abs(fa) < std::abs(fb) ? a : b;
    worst = std::max(worst, std::abs(root - target));
  }
  return worst;
}

void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto radial = find_ites(MediumSpec::disk(1.0, 1.0, 4.0), 30.0);
  const auto planar = planar_find_ites(CurveSpec{}, 1.0, 4.0, 0.0, 30.0, 120);
  bool ok = planar.ites.size() == radial.ites.size();
  double worst = 0.0;
  for (std::size_t i = 0; ok && i < radial.ites.size(); ++i) {
    worst = std::max(worst, std::abs(planar.ites[i].lambda - radial.ites[i].lambda));
    ok = planar.ites[i].multiplicity == radial.ites[i].multiplicity;
  }
  ok = ok && worst <= 1e-5;
  std::string detail = fmt(" sweep at N = %.0f: %.0f ITEs, max diff %.1e (<= 1e-5);", double(planar.nodes),
                           double(radial.ites.size()), worst);

  // Refinement: the smallest admissible node count for each ITE, then twice it.
  const double floor = 1e-8;
  for (const auto& ite : radial.ites) {
    const int N0 = default_nodes(CurveSpec{}, std::sqrt(4.0 * (ite.lambda + 1e-3)));
    const double e0 = planar_error(ite.lambda, ite.multiplicity, N0);
    const double e1 = planar_error(ite.lambda, ite.multiplicity, 2 * N0);
    const bool good = e1 <= std::max(e0 / 4.0, floor);
    ok = ok && good;
    detail += fmt(" %.4f: %.1e -> %.1e;", ite.lambda, e0, e1);
  }
  verdict(7, ok, "planar backend reproduces the disk ITEs up to 30 and converges under N doubling:" + detail,
          since(t0));
}

std::vector<std::string> outputs(const MediumSpec& spec, int threads) {
  FindOptions o;
  o.scan.threads = threads;
  const auto run = find_ites(spec, 300.0, o);
  ReportBundle b;
  b.report = &run.report;
  b.ites = &run.ites;
  b.events = &run.scan.events;
  b.manifest.alpha = run.alpha;
  b.manifest.lambda_max = 300.0;
  b.manifest.mode_cutoff = run.scan.mode_cutoff;
  b.weyl = weyl_check(run.report);
  return {ites_csv(run.ites), counting_csv(run.report), events_csv(run.scan.events), summary_json(b).dump(2)};
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  int compared = 0;
  for (const auto& c : canonical()) {
    const auto ref = outputs(c.spec, 1);
    for (int threads : {1, 2, 4}) {
      const auto other = outputs(c.spec, threads);
      ok = ok && other == ref;
      compared += int(other.size());
    }
  }
  verdict(8, ok, fmt("byte-identical outputs across repeats and 1, 2, 4 workers (%.0f files compared)", compared),
          since(t0));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(int(i + 1), false, std::string("raised: ") + e.what(), 0.0);
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures ? 1 : 0;
}
