#include <algorithm>
#include <cmath>
#include <sstream>

#include "ite/detail/parallel.hpp"
#include "ite/spectra.hpp"

namespace ite {

namespace {

bool is_zero_event(EventKind k) {
  return k == EventKind::zero_crossing || k == EventKind::zero_touch || k == EventKind::singular_point;
}

int signed_weight(const EigencurveEvent& e) {
  switch (e.direction) {
    case Direction::into_negative: return e.degeneracy;
    case Direction::out_of_negative: return -e.degeneracy;
    case Direction::none: return 0;
  }
  return 0;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

std::string IteRecord::kind() const {
  bool singular = false, regular = false;
  for (const auto& c : contributions) {
    (c.kind == EventKind::singular_point ? singular : regular) = true;
  }
  if (singular && regular) return "mixed";
  return singular ? "singular" : "regular";
}

bool CountingReport::nt_holds() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.nt_slack >= 0; });
}

bool CountingReport::sandwich_holds() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.sandwich >= 0; });
}

bool CountingReport::bookkeeping_holds() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.bookkeeping == 0; });
}

double CountingReport::weyl_prediction(std::size_t i) const {
  return constants.weyl_coeff * std::pow(grid.at(i), dimension / 2.0);
}

std::vector<double> default_grid(double alpha, double lambda_max, const ScanResult& scan,
                                 int points_per_decade) {
  std::vector<double> grid;
  const double decades = std::log10(lambda_max / alpha);
  const int count = static_cast<int>(std::floor(decades * points_per_decade));
  for (int i = 1; i <= count; ++i) {
    const double lam = alpha * std::pow(10.0, double(i) / points_per_decade);
    if (lam < lambda_max * (1.0 - 1e-9)) grid.push_back(lam);
  }
  grid.push_back(lambda_max);

  std::vector<double> ev;
  ev.reserve(scan.events.size());
  for (const auto& e : scan.events) ev.push_back(e.lambda);
  std::sort(ev.begin(), ev.end());
  for (auto& g : grid) {
    // Step below any event closer than 1e-7; repeat in case the move lands
    // near another event.
    for (int pass = 0; pass < 8; ++pass) {
      auto it = std::lower_bound(ev.begin(), ev.end(), g - 1e-7);
      if (it == ev.end() || std::abs(*it - g) >= 1e-7) break;
      g = *it - 2e-7;
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

CountingReport assemble_counting(const SeparableModel& model, const MediumConstants& c,
                                 const ScanResult& scan, double alpha,
                                 const std::vector<double>& grid, int threads, bool strict) {
  CountingReport rep;
  rep.alpha = alpha;
  rep.dimension = model.dimension();
  rep.grid = grid;
  rep.constants = c;
  const std::size_t G = grid.size();
  for (std::size_t i = 1; i < G; ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("counting grid must be increasing");
  }
  if (G > 0 && !(grid.front() > alpha)) throw DomainError("counting grid must lie above alpha");

  // Sign counting of every mode at alpha and at all grid points.
  const int M = scan.mode_cutoff;
  std::vector<std::vector<long long>> neg(M + 1, std::vector<long long>(G + 1, 0));
  detail::parallel_for(M + 1, threads, [&](int m) {
    const int deg = model.degeneracy(m);
    for (std::size_t i = 0; i <= G; ++i) {
      const double lam = i == 0 ? alpha : grid[i - 1];
      if (dispersion_unchecked(model, c, m, lam) < 0) neg[m][i] = deg;
    }
  });
  std::vector<long long> n_minus(G + 1, 0);
  for (int m = 0; m <= M; ++m) {
    for (std::size_t i = 0; i <= G; ++i) n_minus[i] += neg[m][i];
  }
  rep.n_minus_alpha = n_minus[0];

  rep.N_T.assign(G, 0);
  rep.N.assign(G, 0);
  rep.N_an.assign(G, 0);
  rep.n_minus.assign(G, 0);
  rep.n1.assign(G, 0);
  rep.n2.assign(G, 0);
  rep.R_sing.assign(G, 0);
  rep.residuals.assign(G, {});

  long long nt = 0, n1 = 0, n2 = 0, rs = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < G; ++i) {
    while (k < scan.events.size() && scan.events[k].lambda <= grid[i]) {
      const auto& e = scan.events[k++];
      if (e.lambda <= alpha) continue;
      if (is_zero_event(e.kind)) nt += e.degeneracy;
      switch (e.kind) {
        case EventKind::zero_crossing: n2 += signed_weight(e); break;
        case EventKind::zero_touch: break;
        case EventKind::pole_passage: n1 += signed_weight(e); break;
        case EventKind::singular_point:
          n1 += signed_weight(e);
          rs += e.degeneracy;
          break;
      }
    }
    rep.N_T[i] = nt;
    rep.n1[i] = n1;
    rep.n2[i] = n2;
    rep.R_sing[i] = rs;
    rep.N[i] = count_up_to(scan.plain_spectrum, grid[i]);
    rep.N_an[i] = count_up_to(scan.an_spectrum, grid[i]);
    rep.n_minus[i] = n_minus[i + 1];

    auto& r = rep.residuals[i];
    r.nt_slack = nt - std::llabs(n2) - rs;
    r.sandwich = rs - std::llabs(n1 - c.sigma * (rep.N_an[i] - rep.N[i]));
    r.bookkeeping = rep.n_minus[i] - rep.n_minus_alpha - n1 - n2;
    if (strict && r.bookkeeping != 0) {
      std::ostringstream os;
      os.precision(17);
      os << "bookkeeping identity fails at lambda = " << grid[i] << ": n_minus change "
         << rep.n_minus[i] - rep.n_minus_alpha << " vs n1 + n2 = " << n1 + n2;
      throw AccountingMismatch(os.str());
    }
  }
  return rep;
}

WeylFit weyl_check(const CountingReport& report, double epsilon, double window_lo) {
  if (report.grid.empty() || report.grid.back() < 100.0 * report.alpha) {
    throw InsufficientRange("the counting grid must span two decades above alpha");
  }
  WeylFit fit;
  fit.epsilon = epsilon;
  fit.window_hi = report.grid.back();
  fit.window_lo = window_lo > 0.0 ? window_lo : fit.window_hi / 10.0;
  fit.exponent_bound = report.dimension / 2.0 - report.constants.delta() + 0.15;

  std::vector<double> lx, ly, mx, my;
  double sum = 0.0;
  int count = 0;
  fit.min_ratio = INFINITY;
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    const double lam = report.grid[i];
    if (lam < fit.window_lo) continue;
    const double ratio = report.N_T[i] / report.weyl_prediction(i);
    fit.min_ratio = std::min(fit.min_ratio, ratio);
    sum += ratio;
    ++count;
    if (report.N_T[i] > 0) {
      lx.push_back(std::log(lam));
      ly.push_back(std::log(double(report.N_T[i])));
    }
    if (report.n_minus[i] > 0) {
      mx.push_back(std::log(lam));
      my.push_back(std::log(double(report.n_minus[i])));
    }
  }
  if (count == 0) throw InsufficientRange("no grid points in the fit window");
  fit.mean_ratio = sum / count;
  fit.slope = lx.size() >= 2 ? slope_fit(lx, ly) : 0.0;
  fit.n_minus_exponent = mx.size() >= 2 ? slope_fit(mx, my) : 0.0;
  fit.bound_satisfied = fit.min_ratio >= 1.0 - epsilon;
  fit.exponent_ok = fit.n_minus_exponent <= fit.exponent_bound;
  return fit;
}

std::vector<IteRecord> collect_ites(const std::vector<EigencurveEvent>& events) {
  std::vector<const EigencurveEvent*> zeros;
  for (const auto& e : events) {
    if (is_zero_event(e.kind)) zeros.push_back(&e);
  }
  std::stable_sort(zeros.begin(), zeros.end(), [](auto* x, auto* y) { return x->lambda < y->lambda; });
  std::vector<IteRecord> out;
  double last = -INFINITY;
  double sum = 0.0;
  for (const auto* e : zeros) {
    if (out.empty() || e->lambda - last > 1e-8) {
      if (!out.empty()) out.back().lambda = sum / out.back().contributions.size();
      out.push_back({});
      sum = 0.0;
    }
    auto& rec = out.back();
    rec.contributions.push_back({e->mode, e->degeneracy, e->kind});
    rec.multiplicity += e->degeneracy;
    sum += e->lambda;
    last = e->lambda;
  }
  if (!out.empty()) out.back().lambda = sum / out.back().contributions.size();
  return out;
}

IteRun find_ites(const MediumSpec& spec, double lambda_max, const FindOptions& opts) {
  spec.validate();
  IteRun run;
  run.constants = medium_constants(spec);
  run.discreteness = validate_discreteness(spec);
  const SeparableModel model(spec);

  const double first_plain = model.nearest_pole(Operator::plain, 0, 1e-12);
  const double first_an = model.nearest_pole(Operator::a_n, 0, 1e-12);
  const int probe_modes =
      mode_cutoff_report(model, std::min(first_plain, first_an), opts.scan.cutoff).modes;
  const MediumConstants& c = run.constants;
  const IteProbe probe = [&](double lam) {
    for (int m = 0; m <= probe_modes; ++m) {
      const double lo = dispersion_unchecked(model, c, m, lam - 1e-6);
      const double hi = dispersion_unchecked(model, c, m, lam + 1e-6);
      const double mid = dispersion_unchecked(model, c, m, lam);
      if ((lo < 0) != (hi < 0) || std::abs(mid) < 1e-7) return true;
    }
    return false;
  };
  run.alpha = pick_alpha(spec, first_plain, first_an, probe);

  run.scan = scan_events(model, c, run.alpha, lambda_max, opts.scan);
  if (!run.discreteness.discreteness_guaranteed) {
    run.scan.warnings.insert(run.scan.warnings.begin(),
                             "no discreteness condition is satisfied for this medium");
  }
  for (const auto& e : run.scan.events) {
    if (is_zero_event(e.kind) && e.lambda < 1.01 * run.alpha) {
      run.scan.warnings.push_back("zero events accumulate just above alpha");
      break;
    }
  }
  const auto grid = default_grid(run.alpha, lambda_max, run.scan, opts.points_per_decade);
  run.report = assemble_counting(model, c, run.scan, run.alpha, grid, opts.scan.threads,
                                 opts.strict_accounting);
  run.ites = collect_ites(run.scan.events);
  return run;
}

}  // namespace ite
