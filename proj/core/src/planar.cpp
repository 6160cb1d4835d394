#include "ite/planar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace ite {

namespace {

struct Sources {
  std::vector<Eigen::Vector2d> points;
};

Sources offset_sources(const BoundaryCurve& curve, double offset_factor) {
  Sources s;
  const int N = curve.size();
  s.points.reserve(N);
  for (int j = 0; j < N; ++j) {
    double h = offset_factor * curve.weights()[j];
    const double kappa = curve.curvature()[j];
    if (kappa > 0.0) h = std::min(h, 0.5 / kappa);
    s.points.push_back(curve.nodes()[j] + h * curve.normals()[j]);
  }
  return s;
}

// Values and normal derivatives of Y0(k|x - y|) at the boundary nodes
// (POSIX y0/y1 from libm).
void collocation(const BoundaryCurve& curve, const Sources& src, double k, Eigen::MatrixXd& A,
                 Eigen::MatrixXd* B) {
  const int N = curve.size();
  const int S = static_cast<int>(src.points.size());
  A.resize(N, S);
  if (B) B->resize(N, S);
  for (int i = 0; i < N; ++i) {
    const Eigen::Vector2d& x = curve.nodes()[i];
    for (int j = 0; j < S; ++j) {
      const Eigen::Vector2d diff = x - src.points[j];
      const double r = diff.norm();
      A(i, j) = ::y0(k * r);
      if (B) {
        (*B)(i, j) = -k * ::y1(k * r) * diff.dot(curve.normals()[i]) / r;
      }
    }
  }
}

// Values of the N-node trigonometric interpolants at the M = p N fine nodes:
// the periodic sinc sin(N x / 2) / (N tan(x / 2)).
Eigen::MatrixXd trig_interpolation(int N, int p) {
  const int M = p * N;
  std::vector<double> kernel(M);
  for (int d = 0; d < M; ++d) {
    if (d == 0) {
      kernel[d] = 1.0;
    } else if (d % p == 0) {
      kernel[d] = 0.0;
    } else {
      const double x = 2.0 * std::numbers::pi * d / M;
      kernel[d] = std::sin(0.5 * N * x) / (N * std::tan(0.5 * x));
    }
  }
  Eigen::MatrixXd T(M, N);
  for (int f = 0; f < M; ++f) {
    for (int i = 0; i < N; ++i) T(f, i) = kernel[((f - p * i) % M + M) % M];
  }
  return T;
}

bool inside_polygon(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& p) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      in = !in;
    }
  }
  return in;
}

std::vector<Eigen::Vector2d> interior_points(const BoundaryCurve& curve) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& x : curve.nodes()) c += x;
  c /= curve.size();
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < curve.size(); i += 2) {
    for (double t : {0.35, 0.7}) {
      const Eigen::Vector2d p = c + t * (curve.nodes()[i] - c);
      if (inside_polygon(curve.nodes(), p)) pts.push_back(p);
    }
  }
  return pts;
}

struct Window {
  double lo, hi;
  bool plain, an;
};

// Illinois variant of regula falsi on a bracket with f(a) f(b) < 0.
template <class F>
double illinois(F f, double a, double b, double fa, double fb, double tol) {
  int side = 0;
  for (int it = 0; it < 100 && b - a > tol; ++it) {
    const double c = (a * fb - b * fa) / (fb - fa);
    const double fc = f(c);
    if (fc == 0.0) return c;
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
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace

DtnMatrix build_dtn(const BoundaryCurve& curve, double wavenumber, double conormal_scale,
                    const PlanarOptions& opts) {
  const int N = curve.size();
  if (!(wavenumber > 0.0) || !(conormal_scale > 0.0)) {
    throw DomainError("build_dtn needs a positive wavenumber and conormal scale");
  }
  if (opts.oversampling < 1) throw ConfigError("oversampling must be at least 1");
  if (N < 8.0 * wavenumber * curve.diameter() - 1e-9) {
    std::ostringstream os;
    os << "N = " << N << " nodes is below 8 k diam = " << 8.0 * wavenumber * curve.diameter();
    throw ConfigError(os.str());
  }
  const int p = opts.oversampling;
  const int M = p * N;
  const BoundaryCurve fine = p == 1 ? curve : BoundaryCurve::sample(curve.spec(), M);
  const Sources src = offset_sources(fine, opts.offset_factor);
  Eigen::MatrixXd A, B;
  collocation(fine, src, wavenumber, A, &B);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > opts.svd_cutoff * sv(0)) ++r;

  DtnMatrix out;
  out.wavenumber = wavenumber;
  out.lambda = wavenumber * wavenumber;
  out.conormal_scale = conormal_scale;
  out.retained = r;
  if (r < M / 2) {
    std::ostringstream os;
    os << "only " << r << " of " << M << " singular values retained at k = " << wavenumber;
    throw IllConditioned(os.str());
  }
  out.condition_indicator = sv(0) / sv(r - 1);

  const Eigen::MatrixXd T = trig_interpolation(N, p);
  const Eigen::MatrixXd Ur = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd UtT = Ur.transpose() * T;
  // Least-squares defect from the SVD factors: the assembled A A^+ carries
  // cond(A) eps of rounding.
  out.residual = (T - Ur * UtT).norm() / T.norm();
  if (out.residual > opts.resonance_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "Dirichlet solve residual " << out.residual << " at k = " << wavenumber;
    throw ResonanceError(os.str(), wavenumber, out.residual);
  }
  const Eigen::MatrixXd coeffs = svd.matrixV().leftCols(r) * (sv.head(r).cwiseInverse().asDiagonal() * UtT);

  const Eigen::Map<const Eigen::VectorXd> w(fine.weights().data(), M);
  const Eigen::MatrixXd WT = w.asDiagonal() * T;
  const Eigen::MatrixXd gram = conormal_scale * (WT.transpose() * (B * coeffs));
  const Eigen::MatrixXd mass = T.transpose() * WT;
  const Eigen::LLT<Eigen::MatrixXd> llt(mass);
  const auto L = llt.matrixL();
  const Eigen::MatrixXd half = L.solve(gram);
  out.weighted = L.solve(half.transpose()).transpose();
  out.entries = llt.solve(gram);
  out.symmetry_defect = (out.weighted - out.weighted.transpose()).norm() / out.weighted.norm();
  return out;
}

PMatrix build_P(const BoundaryCurve& curve, double lambda, double a, double n, int sigma,
                const PlanarOptions& opts) {
  if (!(lambda > 0.0)) throw DomainError("build_P needs lambda > 0");
  DtnMatrix plain, an;
  try {
    plain = build_dtn(curve, std::sqrt(lambda), 1.0, opts);
  } catch (const ResonanceError& e) {
    throw ResonanceError(e.what(), e.wavenumber(), e.residual(), Operator::plain);
  }
  try {
    an = build_dtn(curve, std::sqrt(lambda * n / a), a, opts);
  } catch (const ResonanceError& e) {
    throw ResonanceError(e.what(), e.wavenumber(), e.residual(), Operator::a_n);
  }
  const Eigen::MatrixXd M = double(sigma) * (plain.weighted - an.weighted);

  PMatrix out;
  out.lambda = lambda;
  const double norm = M.norm();
  out.symmetry_defect = norm > 0.0 ? (M - M.transpose()).norm() / norm : 0.0;
  out.matrix = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.matrix, Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues();
  return out;
}

double dirichlet_indicator(const BoundaryCurve& curve, double wavenumber, const PlanarOptions& opts) {
  const Sources src = offset_sources(curve, opts.offset_factor);
  const auto inner = interior_points(curve);
  const int N = curve.size();
  const int S = static_cast<int>(src.points.size());
  Eigen::MatrixXd A;
  collocation(curve, src, wavenumber, A, nullptr);
  Eigen::MatrixXd stacked(N + static_cast<int>(inner.size()), S);
  stacked.topRows(N) = A;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (int j = 0; j < S; ++j) {
      stacked(N + i, j) = ::y0(wavenumber * (inner[i] - src.points[j]).norm());
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > 1e-14 * sv(0)) ++r;
  const Eigen::MatrixXd QB = svd.matrixU().topLeftCorner(N, r);
  Eigen::BDCSVD<Eigen::MatrixXd> small(QB);
  return small.singularValues()(r - 1);
}

std::vector<double> planar_dirichlet_eigenvalues(const BoundaryCurve& curve, double lambda_max,
                                                 const PlanarOptions& opts) {
  const double kmax = std::sqrt(lambda_max);
  const double h = std::numbers::pi / (40.0 * curve.diameter());
  const int steps = std::max(4, static_cast<int>(std::ceil((kmax + h) / h)));
  std::vector<double> k(steps + 1), v(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    k[i] = 0.05 + i * h;
    v[i] = dirichlet_indicator(curve, k[i], opts);
  }
  std::vector<double> out;
  for (int i = 1; i < steps; ++i) {
    if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1]) || v[i] > 0.1) continue;
    std::uintmax_t iters = 100;
    auto f = [&](double x) { return dirichlet_indicator(curve, x, opts); };
    const auto [km, fm] = boost::math::tools::brent_find_minima(f, k[i - 1], k[i + 1], 30, iters);
    if (fm < 1e-3 && km * km <= lambda_max) out.push_back(km * km);
  }
  return out;
}

int default_nodes(const CurveSpec& spec, double max_wavenumber, const PlanarOptions& opts) {
  if (opts.nodes > 0) return opts.nodes;
  const double diam = BoundaryCurve::sample(spec, 256).diameter();
  int N = std::max(64, static_cast<int>(std::ceil(8.0 * max_wavenumber * diam)));
  return N + (N % 2);
}

PlanarResult planar_find_ites(const CurveSpec& spec, double a, double n, double lo, double hi,
                              int coarse_steps, const PlanarOptions& opts) {
  if (!(a > 0.0) || !(n > 0.0)) throw ConfigError("planar coefficients must be positive");
  if (!(lo >= 0.0) || !(hi > lo) || hi > opts.lambda_cap) {
    std::ostringstream os;
    os << "planar sweep range must satisfy 0 <= lo < hi <= " << opts.lambda_cap;
    throw ConfigError(os.str());
  }
  if (coarse_steps < 1) throw ConfigError("coarse_steps must be positive");
  int sigma = 1;
  if (std::abs(a - 1.0) > 1e-14) {
    sigma = a < 1.0 ? 1 : -1;
  } else if (std::abs(n - 1.0) > 1e-14) {
    sigma = n > 1.0 ? 1 : -1;
  }
  const double ratio = n / a;
  const double kmax = std::max(std::sqrt(hi), std::sqrt(hi * ratio));

  PlanarResult res;
  res.nodes = default_nodes(spec, kmax, opts);
  const BoundaryCurve curve = BoundaryCurve::sample(spec, res.nodes);
  const double gamma = curve.area() * (1.0 - ratio);
  if (std::abs(gamma) < 1e-12 * curve.area()) {
    throw GammaZeroError("gamma vanishes for this planar medium", gamma, false);
  }

  const auto dir = planar_dirichlet_eigenvalues(curve, std::max(hi, hi * ratio) * (1.0 + 1e-6), opts);
  if (lo <= 0.0) lo = dir.empty() ? 0.5 * hi : 0.5 * std::min(dir.front(), dir.front() / ratio);
  if (!(hi > lo)) throw ConfigError("planar sweep range is empty below the first resonance");
  res.alpha = lo;
  std::vector<Window> windows;
  const double w = opts.pole_window;
  for (double p : dir) {
    const double pa = p / ratio;
    if (p > lo && p <= hi) {
      res.plain_poles.push_back(p);
      windows.push_back({p * (1 - w) * (1 - w), p * (1 + w) * (1 + w), true, false});
    }
    if (pa > lo && pa <= hi) {
      res.an_poles.push_back(pa);
      windows.push_back({pa * (1 - w) * (1 - w), pa * (1 + w) * (1 + w), false, true});
    }
  }
  std::sort(windows.begin(), windows.end(), [](auto& x, auto& y) { return x.lo < y.lo; });
  std::vector<Window> merged;
  for (const auto& win : windows) {
    if (!merged.empty() && win.lo <= merged.back().hi) {
      auto& m = merged.back();
      m.hi = std::max(m.hi, win.hi);
      m.plain = m.plain || win.plain;
      m.an = m.an || win.an;
    } else {
      merged.push_back(win);
    }
  }
  for (const auto& m : merged) {
    res.gaps.push_back({m.lo, m.hi, m.plain && m.an ? "both" : (m.plain ? "plain" : "a_n")});
    if (m.plain && m.an) {
      std::ostringstream os;
      os.precision(17);
      os << "near-coincident plain and a_n resonances in [" << m.lo << ", " << m.hi
         << "]; singular multiplicity not certified";
      res.notes.push_back(os.str());
    }
  }

  // Pole-free segments of (lo, hi].
  std::vector<std::pair<double, double>> segments;
  double start = lo;
  for (const auto& m : merged) {
    if (m.lo > start) segments.push_back({start, std::min(m.lo, hi)});
    start = std::max(start, m.hi);
  }
  if (start < hi) segments.push_back({start, hi});

  auto spectrum = [&](double lam) { return build_P(curve, lam, a, n, sigma, opts).eigenvalues; };
  auto negatives = [](const Eigen::VectorXd& e) {
    return static_cast<int>((e.array() < 0.0).count());
  };

  const double step = (hi - lo) / coarse_steps;
  std::vector<double> roots;
  for (const auto& [s, e] : segments) {
    const int m = std::max(1, static_cast<int>(std::ceil((e - s) / step)));
    double lprev = s;
    Eigen::VectorXd eprev;
    bool anchored = false;
    for (int j = 0; j <= m; ++j) {
      const double lcur = j == m ? e : s + (e - s) * j / m;
      Eigen::VectorXd ecur;
      try {
        ecur = spectrum(lcur);
      } catch (const ResonanceError& err) {
        res.gaps.push_back({anchored ? lprev : lcur, j == m ? e : s + (e - s) * (j + 1) / m, to_string(err.op())});
        res.notes.push_back(std::string("unlocated resonance: ") + err.what());
        anchored = false;
        continue;
      }
      if (!anchored) {
        lprev = lcur;
        eprev = std::move(ecur);
        anchored = true;
        continue;
      }
      const int nl = negatives(eprev), nr = negatives(ecur);
      for (int idx = std::min(nl, nr); idx < std::max(nl, nr); ++idx) {
        auto f = [&](double x) { return spectrum(x)(idx); };
        double u = lprev, v = lcur, fu = eprev(idx), fv = ecur(idx);
        while (v - u > opts.lambda_tol) {
          const double mid = 0.5 * (u + v);
          const double fm = f(mid);
          if ((fm < 0) == (fu < 0)) {
            u = mid;
            fu = fm;
          } else {
            v = mid;
            fv = fm;
          }
        }
        const double root = illinois(f, u, v, fu, fv, 1e-12 * v);
        const double fr = std::abs(f(root));
        if (fr > 1e-6 * (1.0 + std::abs(fu) + std::abs(fv)) && std::min(std::abs(fu), std::abs(fv)) > 1e-3) {
          std::ostringstream os;
          os.precision(17);
          os << "ordered eigenvalue " << idx << " jumps near lambda = " << root
             << " without a located resonance";
          throw TrackingLost(os.str());
        }
        roots.push_back(root);
      }
      lprev = lcur;
      eprev = std::move(ecur);
    }
  }

  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i + 1;
    double sum = roots[i];
    while (j < roots.size() && roots[j] - roots[j - 1] <= opts.cluster_tol) sum += roots[j++];
    res.ites.push_back({sum / double(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return res;
}

}  // namespace ite
