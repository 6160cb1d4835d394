#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "ite/detail/parallel.hpp"
#include "ite/spectra.hpp"

namespace ite {

namespace {

struct PoleMark {
  double lambda;
  PoleSide side;
};

struct ModeScan {
  std::vector<EigencurveEvent> events;
  std::vector<std::string> warnings;
};

int sign_of(double v) { return v < 0 ? -1 : 1; }

double refine_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                   double tol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = 200;
  auto stop = [tol](double u, double v) { return std::abs(v - u) <= tol; };
  const auto [u, v] = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
  return 0.5 * (u + v);
}

std::vector<PoleMark> merge_poles(const std::vector<double>& plain, const std::vector<double>& an,
                                  double tol) {
  std::vector<PoleMark> out;
  std::size_t i = 0, j = 0;
  while (i < plain.size() || j < an.size()) {
    if (i < plain.size() && j < an.size() && std::abs(plain[i] - an[j]) <= tol) {
      out.push_back({0.5 * (plain[i] + an[j]), PoleSide::both});
      ++i;
      ++j;
    } else if (j >= an.size() || (i < plain.size() && plain[i] < an[j])) {
      out.push_back({plain[i++], PoleSide::plain});
    } else {
      out.push_back({an[j++], PoleSide::a_n});
    }
  }
  return out;
}

ModeScan scan_mode(const SeparableModel& model, const MediumConstants& c, int m, double alpha,
                   double lambda_max, double h_k, const ScanOptions& opts) {
  ModeScan out;
  const int deg = model.degeneracy(m);
  const std::function<double(double)> mu = [&](double lam) {
    return dispersion_unchecked(model, c, m, lam);
  };
  auto emit = [&](EventKind kind, double lam, Direction dir, PoleSide side, bool flagged) {
    out.events.push_back({kind, lam, m, deg, dir, side, flagged});
  };
  auto crossing = [&](double a, double b, double fa, double fb, bool flagged) {
    const double lam = refine_root(mu, a, b, fa, fb, opts.lambda_tol);
    emit(EventKind::zero_crossing, lam, fa < 0 ? Direction::out_of_negative : Direction::into_negative,
         PoleSide::none, flagged);
  };

  const auto marks = merge_poles(model.poles(Operator::plain, m, alpha, lambda_max),
                                 model.poles(Operator::a_n, m, alpha, lambda_max), opts.singular_tol);

  // Near a singular point both symbols blow up and their difference loses
  // all digits well before the pole, so the excluded window is wider.
  auto rel_offset = [&](const PoleMark& mk) {
    return mk.side == PoleSide::both ? std::max(opts.pole_offset, opts.singular_offset) : opts.pole_offset;
  };

  // Pole-free intervals between consecutive marks.
  for (std::size_t t = 0; t <= marks.size(); ++t) {
    const double l = t == 0 ? alpha : marks[t - 1].lambda;
    const double r = t == marks.size() ? lambda_max : marks[t].lambda;
    if (!(r > l)) continue;
    const double lo = t == 0 ? l : l + std::min(rel_offset(marks[t - 1]) * l, 0.25 * (r - l));
    const double hi = t == marks.size() ? r : r - std::min(rel_offset(marks[t]) * r, 0.25 * (r - l));
    const double klo = std::sqrt(lo), khi = std::sqrt(hi);
    const int steps = std::max(2, static_cast<int>(std::ceil((khi - klo) / h_k)));
    std::vector<double> lam(steps + 1), val(steps + 1);
    for (int i = 0; i <= steps; ++i) {
      const double k = i == steps ? khi : klo + (khi - klo) * i / steps;
      lam[i] = i == 0 ? lo : (i == steps ? hi : k * k);
      val[i] = mu(lam[i]);
    }
    for (int i = 0; i < steps; ++i) {
      if (sign_of(val[i]) != sign_of(val[i + 1])) crossing(lam[i], lam[i + 1], val[i], val[i + 1], false);
    }
    // Local minima of |mu| without a sign change: tangential zeros, or a
    // pair of crossings closer than the scan step.
    for (int i = 1; i < steps; ++i) {
      const int s = sign_of(val[i]);
      if (sign_of(val[i - 1]) != s || sign_of(val[i + 1]) != s) continue;
      if (std::abs(val[i]) > std::abs(val[i - 1]) || std::abs(val[i]) > std::abs(val[i + 1])) continue;
      auto absmu = [&](double x) { return std::abs(mu(x)); };
      std::uintmax_t iters = 200;
      const auto [xmin, fmin] = boost::math::tools::brent_find_minima(absmu, lam[i - 1], lam[i + 1], 40, iters);
      (void)fmin;
      const double vmin = mu(xmin);
      if (sign_of(vmin) != s) {
        crossing(lam[i - 1], xmin, val[i - 1], vmin, false);
        crossing(xmin, lam[i + 1], vmin, val[i + 1], false);
      } else if (std::abs(vmin) < opts.touch_tol) {
        emit(EventKind::zero_touch, xmin, Direction::none, PoleSide::none, false);
      }
    }
  }

  // Pole passages and singular points from one-sided samples.
  for (std::size_t t = 0; t < marks.size(); ++t) {
    const double p = marks[t].lambda;
    const double gap_lo = p - (t == 0 ? alpha : marks[t - 1].lambda);
    const double gap_hi = (t + 1 == marks.size() ? INFINITY : marks[t + 1].lambda) - p;
    auto offset = [&](double rel) { return std::min({rel * p, 0.25 * gap_lo, 0.25 * gap_hi}); };
    const double off = offset(rel_offset(marks[t]));
    const double vm = mu(p - off), vp = mu(p + off);
    Direction dir = Direction::none;
    if (sign_of(vm) != sign_of(vp)) {
      dir = vm > 0 ? Direction::into_negative : Direction::out_of_negative;
    } else if (marks[t].side != PoleSide::both) {
      // A zero of the curve sits between the pole and one of the samples.
      bool found = false;
      for (double rel : {1e-8, 1e-10, 1e-12}) {
        const double o2 = offset(rel);
        const double wm = mu(p - o2), wp = mu(p + o2);
        if (sign_of(wm) == sign_of(wp)) continue;
        if (sign_of(wm) != sign_of(vm)) {
          crossing(p - off, p - o2, vm, wm, true);
        } else {
          crossing(p + o2, p + off, wp, vp, true);
        }
        dir = wm > 0 ? Direction::into_negative : Direction::out_of_negative;
        found = true;
        break;
      }
      if (!found) {
        std::ostringstream os;
        os.precision(17);
        os << "mode " << m << ": no sign change across the pole at " << p;
        out.warnings.push_back(os.str());
      }
    }
    emit(marks[t].side == PoleSide::both ? EventKind::singular_point : EventKind::pole_passage, p, dir,
         marks[t].side, false);
  }

  std::sort(out.events.begin(), out.events.end(), [](const auto& x, const auto& y) {
    return std::tie(x.lambda, x.kind) < std::tie(y.lambda, y.kind);
  });
  double last_zero = -INFINITY;
  for (const auto& e : out.events) {
    if (e.kind != EventKind::zero_crossing && e.kind != EventKind::zero_touch) continue;
    if (e.lambda - last_zero < 10.0 * opts.lambda_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "mode " << m << ": zeros at " << last_zero << " and " << e.lambda
         << " are closer than the resolution " << 10.0 * opts.lambda_tol;
      throw ResolutionError(os.str());
    }
    last_zero = e.lambda;
  }
  return out;
}

}  // namespace

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::zero_crossing: return "zero_crossing";
    case EventKind::zero_touch: return "zero_touch";
    case EventKind::pole_passage: return "pole_passage";
    case EventKind::singular_point: return "singular_point";
  }
  return "?";
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::into_negative: return "into_negative";
    case Direction::out_of_negative: return "out_of_negative";
    case Direction::none: return "none";
  }
  return "?";
}

const char* to_string(PoleSide p) {
  switch (p) {
    case PoleSide::none: return "none";
    case PoleSide::plain: return "plain";
    case PoleSide::a_n: return "a_n";
    case PoleSide::both: return "both";
  }
  return "?";
}

double dispersion_unchecked(const SeparableModel& model, const MediumConstants& c, int mode,
                            double lambda) {
  return c.sigma * model.difference(mode, lambda);
}

double dispersion(const SeparableModel& model, const MediumConstants& c, int mode, double lambda) {
  for (Operator op : {Operator::plain, Operator::a_n}) {
    const double p = model.nearest_pole(op, mode, lambda);
    if (std::abs(p - lambda) < 1e-10) {
      std::ostringstream os;
      os.precision(17);
      os << to_string(op) << " symbol of mode " << mode << " has a pole at lambda = " << p;
      throw PoleError(os.str(), p, op);
    }
  }
  return dispersion_unchecked(model, c, mode, lambda);
}

ScanResult scan_events(const SeparableModel& model, const MediumConstants& c, double alpha,
                       double lambda_max, const ScanOptions& opts) {
  if (!(alpha > 0.0) || !(lambda_max > alpha)) {
    throw DomainError("scan_events needs 0 < alpha < lambda_max");
  }
  ScanResult res;
  const CutoffResult cut = mode_cutoff_report(model, lambda_max, opts.cutoff);
  res.mode_cutoff = cut.modes + opts.extra_modes;
  res.cutoff_retries = cut.retries;

  const double speed = std::max(1.0, model.max_wavenumber_radius(1.0) / model.radius());
  const double h_k = std::numbers::pi / (8.0 * model.radius() * speed) * opts.step_factor;

  const int count = res.mode_cutoff + 1;
  std::vector<ModeScan> per_mode(count);
  detail::parallel_for(count, opts.threads, [&](int m) {
    per_mode[m] = scan_mode(model, c, m, alpha, lambda_max, h_k, opts);
  });
  for (auto& ms : per_mode) {
    res.events.insert(res.events.end(), ms.events.begin(), ms.events.end());
    res.warnings.insert(res.warnings.end(), ms.warnings.begin(), ms.warnings.end());
  }
  std::stable_sort(res.events.begin(), res.events.end(), [](const auto& x, const auto& y) {
    return std::tie(x.lambda, x.mode, x.kind) < std::tie(y.lambda, y.mode, y.kind);
  });

  res.plain_spectrum = dirichlet_spectrum(model, Operator::plain, lambda_max);
  res.an_spectrum = dirichlet_spectrum(model, Operator::a_n, lambda_max);
  return res;
}

long long negative_count(const SeparableModel& model, const MediumConstants& c, int cutoff,
                         double lambda, int threads) {
  std::vector<long long> part(cutoff + 1, 0);
  detail::parallel_for(cutoff + 1, threads, [&](int m) {
    if (dispersion_unchecked(model, c, m, lambda) < 0) part[m] = model.degeneracy(m);
  });
  long long total = 0;
  for (long long v : part) total += v;
  return total;
}

}  // namespace ite
