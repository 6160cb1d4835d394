#include <algorithm>
#include <cmath>

#include "ite/spectra.hpp"

namespace ite {

namespace {

double pole_distance(const std::vector<double>& poles, double lam) {
  auto it = std::lower_bound(poles.begin(), poles.end(), lam);
  double d = INFINITY;
  if (it != poles.end()) d = std::min(d, *it - lam);
  if (it != poles.begin()) d = std::min(d, lam - *std::prev(it));
  return d;
}

// Moves lam off any pole closer than 1e-3 lam, to whichever side keeps the
// larger distance.
double keep_clear(const std::vector<double>& poles, double lam) {
  for (int pass = 0; pass < 16; ++pass) {
    if (pole_distance(poles, lam) >= 1e-3 * lam) return lam;
    auto it = std::lower_bound(poles.begin(), poles.end(), lam);
    double p;
    if (it == poles.end()) p = *std::prev(it);
    else if (it == poles.begin()) p = *it;
    else p = (*it - lam < lam - *std::prev(it)) ? *it : *std::prev(it);
    const double lo = p - 1.01e-3 * p, hi = p + 1.01e-3 * p;
    lam = pole_distance(poles, lo) >= pole_distance(poles, hi) ? lo : hi;
  }
  return lam;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || points_per_decade < 1) {
    throw DomainError("log_grid needs 0 < lo < hi and a positive density");
  }
  const int count = static_cast<int>(std::ceil(std::log10(hi / lo) * points_per_decade));
  std::vector<double> g;
  for (int i = 0; i <= count; ++i) {
    g.push_back(std::min(hi, lo * std::pow(10.0, double(i) / points_per_decade)));
  }
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

EstimateSummary operator_estimate_check(const SeparableModel& model,
                                        const std::vector<double>& lambda_grid, int mode_max,
                                        int near_pole_count, double near_pole_distance) {
  EstimateSummary out;
  if (lambda_grid.empty()) return out;
  const double lam_hi = *std::max_element(lambda_grid.begin(), lambda_grid.end());
  const double lam_lo = *std::min_element(lambda_grid.begin(), lambda_grid.end());

  std::vector<double> poles;
  for (const auto& e : dirichlet_spectrum(model, Operator::a_n, 1.1 * lam_hi + 1.0)) {
    poles.push_back(e.lambda);
  }
  std::sort(poles.begin(), poles.end());

  std::vector<double> f0(mode_max + 1), s0(mode_max + 1);
  for (int m = 0; m <= mode_max; ++m) {
    f0[m] = model.symbol_at_zero(Operator::a_n, m);
    s0[m] = model.slope_at_zero(Operator::a_n, m);
  }
  const double R = model.radius();

  auto sample = [&](double lam, bool near) {
    EstimateSample s{lam, pole_distance(poles, lam), near, 0.0, 0.0, 0, 0};
    const double scale = lam * lam / s.distance + lam;
    for (int m = 0; m <= mode_max; ++m) {
      const double t = model.symbol(Operator::a_n, m, lam) - f0[m];
      const double rem = t - lam * s0[m];
      const double w = 1.0 + double(m) * m;
      const double r1 = std::abs(t) * std::sqrt(w) * R / scale;
      const double r2 = std::abs(rem) * w * std::sqrt(w) * R / (scale * scale);
      if (r1 > s.c1) {
        s.c1 = r1;
        s.c1_mode = m;
      }
      if (r2 > s.c2) {
        s.c2 = r2;
        s.c2_mode = m;
      }
    }
    out.samples.push_back(s);
  };

  for (double lam : lambda_grid) sample(keep_clear(poles, lam), false);

  std::vector<double> in_range;
  for (double p : poles) {
    if (p - near_pole_distance >= lam_lo && p + near_pole_distance <= lam_hi) in_range.push_back(p);
  }
  const int picks = std::min<int>(near_pole_count, static_cast<int>(in_range.size()));
  for (int j = 0; j < picks; ++j) {
    const std::size_t idx =
        picks == 1 ? 0 : static_cast<std::size_t>(std::llround(double(j) * (in_range.size() - 1) / (picks - 1)));
    sample(in_range[idx] - near_pole_distance, true);
    sample(in_range[idx] + near_pole_distance, true);
  }
  std::sort(out.samples.begin(), out.samples.end(),
            [](const auto& a, const auto& b) { return a.lambda < b.lambda; });

  // Decades [10^k, 10^{k+1}) spanning the requested grid; the last one is
  // closed and also takes near-pole samples above the grid top.
  const auto [gmin, gmax] = std::minmax_element(lambda_grid.begin(), lambda_grid.end());
  const int k0 = static_cast<int>(std::floor(std::log10(*gmin) + 1e-12));
  const int k1 = std::max(k0 + 1, static_cast<int>(std::ceil(std::log10(*gmax) - 1e-12)));
  for (int k = k0; k <= k1; ++k) out.decade_edges.push_back(std::pow(10.0, k));
  const std::size_t D = out.decade_edges.size() - 1;
  out.c1_decade_max.assign(D, 0.0);
  out.c2_decade_max.assign(D, 0.0);
  for (const auto& s : out.samples) {
    std::size_t d = 0;
    while (d + 1 < D && s.lambda >= out.decade_edges[d + 1]) ++d;
    out.c1_decade_max[d] = std::max(out.c1_decade_max[d], s.c1);
    out.c2_decade_max[d] = std::max(out.c2_decade_max[d], s.c2);
    out.c1 = std::max(out.c1, s.c1);
    out.c2 = std::max(out.c2, s.c2);
  }
  out.decade_stable = D >= 2 && std::isfinite(out.c1) && std::isfinite(out.c2) &&
                      out.c1_decade_max[D - 1] <= 2.0 * out.c1_decade_max[D - 2] &&
                      out.c2_decade_max[D - 1] <= 2.0 * out.c2_decade_max[D - 2];
  return out;
}

}  // namespace ite
