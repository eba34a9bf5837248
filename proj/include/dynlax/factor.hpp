#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dynlax/models.hpp"
#include "dynlax/numint.hpp"

namespace dynlax {

// ---- matrix primitives ----------------------------------------------------

inline Mat mat_exp(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("mat_exp needs a square matrix");
  return m.exp();
}

inline CartanPoint cartan_log(const LieAlgebraData& alg, const Mat& d, double tol = 1e-10) {
  if (d.rows() != alg.rep_dim || d.cols() != alg.rep_dim) throw DimensionError("matrix has wrong size");
  Mat off = d;
  off.diagonal().setZero();
  const double scale = d.cwiseAbs().maxCoeff();
  if (off.cwiseAbs().maxCoeff() > tol * scale) throw PreconditionError("cartan_log needs a diagonal matrix");
  Vec l(alg.rep_dim);
  for (int i = 0; i < alg.rep_dim; ++i) {
    if (!(d(i, i) > 0.0)) throw BranchError("non-positive diagonal entry: the flow left the real chart");
    l[i] = std::log(d(i, i));
  }
  if (std::abs(l.sum()) > tol) throw PreconditionError("cartan_log needs unit determinant");
  return cartan_part(from_matrix(alg, Mat(l.asDiagonal())));
}

struct GaussFactors {
  Mat n_minus;
  Mat h;
  Mat n_plus;
};

// m = n_minus h n_plus^{-1} by elimination without pivoting.
inline GaussFactors gauss_full(const Mat& m, double tol = 1e-12) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw DimensionError("gauss_full needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  Mat u = m;
  Mat l = Mat::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(u(k, k)) <= tol * scale)
      throw BigCellError("leading principal minor " + std::to_string(k + 1) + " vanishes");
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = u(i, k) / u(k, k);
      l(i, k) = f;
      u.row(i) -= f * u.row(k);
      u(i, k) = 0.0;
    }
  }
  const Vec dg = u.diagonal();
  Mat unit_upper = dg.cwiseInverse().asDiagonal() * u;
  GaussFactors g;
  g.n_minus = l;
  g.h = dg.asDiagonal();
  g.n_plus = unit_upper.triangularView<Eigen::UnitUpper>().solve(Mat::Identity(n, n));
  return g;
}

// ---- parabolic chart ------------------------------------------------------

enum class Pattern { PPlus, PMinus, Levi, NPlus, NMinus };

struct ParabolicChart {
  AlgebraPtr algebra;
  std::vector<int> pi_prime;
  std::vector<std::pair<int, int>> blocks;  // (start, size)
  std::vector<int> block_of;

  bool allowed(Pattern p, int i, int j) const {
    const int bi = block_of[static_cast<std::size_t>(i)], bj = block_of[static_cast<std::size_t>(j)];
    switch (p) {
      case Pattern::PPlus: return bi <= bj;
      case Pattern::PMinus: return bi >= bj;
      case Pattern::Levi: return bi == bj;
      case Pattern::NPlus: return bi < bj;
      case Pattern::NMinus: return bi > bj;
    }
    return false;
  }

  double off_pattern(const Mat& m, Pattern p) const {
    double e = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (!allowed(p, static_cast<int>(i), static_cast<int>(j))) e = std::max(e, std::abs(m(i, j)));
    return e;
  }

  Mat block_diagonal(const Mat& m) const {
    Mat g = Mat::Zero(m.rows(), m.cols());
    for (const auto& [s, n] : blocks) g.block(s, s, n, n) = m.block(s, s, n, n);
    return g;
  }
};

inline ParabolicChart make_chart(AlgebraPtr alg, const std::vector<int>& pi_prime) {
  if (alg->series != Series::A) throw UnsupportedAlgebra("parabolic chart implemented for type A only");
  const RFamily r = make_rfamily(alg, pi_prime);
  ParabolicChart c;
  c.algebra = alg;
  c.pi_prime = r.pi_prime;
  c.block_of.assign(static_cast<std::size_t>(alg->rep_dim), 0);
  int start = 0;
  for (int i = 1; i <= alg->rep_dim; ++i) {
    // indices i-1 and i share a block when alpha_i is in pi'
    const bool joined = i < alg->rep_dim && r.simple_in_pi[static_cast<std::size_t>(i - 1)];
    if (!joined) {
      c.blocks.push_back({start, i - start});
      start = i;
    }
  }
  for (std::size_t b = 0; b < c.blocks.size(); ++b)
    for (int k = 0; k < c.blocks[b].second; ++k)
      c.block_of[static_cast<std::size_t>(c.blocks[b].first + k)] = static_cast<int>(b);
  return c;
}

struct ParabolicFactors {
  Mat g_levi;
  Mat n_plus;
};

// m = g_levi n_plus^{-1} for m block upper triangular.
inline ParabolicFactors gauss_parabolic(const Mat& m, const ParabolicChart& chart, double tol = 1e-10) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (chart.off_pattern(m, Pattern::PPlus) > tol * scale) throw PatternError("matrix is not block upper triangular");
  ParabolicFactors f;
  f.g_levi = chart.block_diagonal(m);
  for (const auto& [s, n] : chart.blocks) {
    Eigen::FullPivLU<Mat> lu(f.g_levi.block(s, s, n, n));
    const double piv = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (piv <= 1e-12 * scale) throw BigCellError("singular Levi block");
  }
  const Mat u = f.g_levi.inverse() * m;
  f.n_plus = u.inverse();
  return f;
}

// ---- eigenbasis continuation in the Levi factor ---------------------------

// Follows g(t) e^{q0} = x(t) d(t) x(t)^{-1} block by block, matching each new
// eigenvector to the closest previous one.
class LeviEigenTracker {
 public:
  LeviEigenTracker(ParabolicChart chart, double imag_tol = 1e-9, double gap_tol = 1e-9)
      : chart_(std::move(chart)), imag_tol_(imag_tol), gap_tol_(gap_tol) {
    const int n = chart_.algebra->rep_dim;
    prev_ = Mat::Identity(n, n);
  }

  // Returns (x, d) with det x = 1.
  std::pair<Mat, Mat> step(const Mat& ge) {
    const int n = chart_.algebra->rep_dim;
    Mat x = Mat::Zero(n, n);
    Vec d(n);
    for (const auto& [s, m] : chart_.blocks) {
      if (m == 1) {
        x(s, s) = 1.0;
        d[s] = ge(s, s);
        continue;
      }
      const Mat blk = ge.block(s, s, m, m);
      Eigen::EigenSolver<Mat> es(blk);
      if (es.info() != Eigen::Success) throw PathBreakdown("eigen decomposition failed");
      const Eigen::VectorXcd ev = es.eigenvalues();
      const double sc = ev.cwiseAbs().maxCoeff();
      if (ev.imag().cwiseAbs().maxCoeff() > imag_tol_ * sc) throw PathBreakdown("complex eigenvalues in a Levi block");
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (std::abs(ev[i].real() - ev[j].real()) < gap_tol_ * sc) throw PathBreakdown("colliding eigenvalues");
      Mat v = es.eigenvectors().real();
      for (int j = 0; j < m; ++j) v.col(j).normalize();
      const Mat prev = prev_.block(s, s, m, m);
      const Mat overlap = (prev.transpose() * v).cwiseAbs();
      std::vector<int> perm(static_cast<std::size_t>(m));
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<int> best = perm;
      double best_score = -1.0;
      do {
        double sc2 = 0.0;
        for (int j = 0; j < m; ++j) sc2 += overlap(j, perm[static_cast<std::size_t>(j)]);
        if (sc2 > best_score) {
          best_score = sc2;
          best = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (int j = 0; j < m; ++j) {
        const int k = best[static_cast<std::size_t>(j)];
        if (overlap(j, k) < 0.5) throw PathBreakdown("eigenvector continuation lost track");
        Vec col = v.col(k);
        if (prev.col(j).dot(col) < 0) col = -col;
        x.block(s, s + j, m, 1) = col;
        d[s + j] = ev[k].real();
      }
    }
    prev_ = x;
    const double det = x.determinant();
    if (!(det > 0.0)) throw PathBreakdown("eigenvector frame lost orientation");
    return {x * std::pow(det, -1.0 / n), Mat(d.asDiagonal())};
  }

 private:
  ParabolicChart chart_;
  double imag_tol_;
  double gap_tol_;
  Mat prev_;
};

struct EigPath {
  std::vector<Mat> x_path;
  std::vector<Mat> d_path;
};

inline EigPath levi_eig_path(const std::vector<Mat>& g_path, const CartanPoint& q0, const ParabolicChart& chart) {
  const Mat e0 = torus_element(*chart.algebra, q0);
  LeviEigenTracker tr(chart);
  EigPath out;
  for (std::size_t k = 0; k < g_path.size(); ++k) {
    auto [x, d] = tr.step(g_path[k] * e0);
    out.x_path.push_back(std::move(x));
    out.d_path.push_back(std::move(d));
  }
  return out;
}

// ---- b(t) quadrature --------------------------------------------------------

namespace detail {

inline std::vector<Mat> finite_difference(const std::vector<Mat>& x, double h) {
  const std::size_t n = x.size();
  std::vector<Mat> dx(n);
  if (n < 2) {
    for (auto& m : dx) m = Mat::Zero(x[0].rows(), x[0].cols());
    return dx;
  }
  if (n < 5) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == 0) dx[k] = (x[1] - x[0]) / h;
      else if (k == n - 1) dx[k] = (x[n - 1] - x[n - 2]) / h;
      else dx[k] = (x[k + 1] - x[k - 1]) / (2 * h);
    }
    return dx;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= 2 && k + 2 < n)
      dx[k] = (-x[k + 2] + 8 * x[k + 1] - 8 * x[k - 1] + x[k - 2]) / (12 * h);
    else if (k == 0)
      dx[k] = (-25 * x[0] + 48 * x[1] - 36 * x[2] + 16 * x[3] - 3 * x[4]) / (12 * h);
    else if (k == 1)
      dx[k] = (-3 * x[0] - 10 * x[1] + 18 * x[2] - 6 * x[3] + x[4]) / (12 * h);
    else if (k == n - 2)
      dx[k] = (3 * x[n - 1] + 10 * x[n - 2] - 18 * x[n - 3] + 6 * x[n - 4] - x[n - 5]) / (12 * h);
    else
      dx[k] = (25 * x[n - 1] - 48 * x[n - 2] + 36 * x[n - 3] - 16 * x[n - 4] + 3 * x[n - 5]) / (12 * h);
  }
  return dx;
}

// Running integral of sampled values: Simpson on even indices, Simpson 3/8 on odd ones.
inline std::vector<Vec> cumulative_integral(const std::vector<Vec>& f, double h) {
  const std::size_t n = f.size();
  std::vector<Vec> out(n, Vec::Zero(f[0].size()));
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  if (n == 3) out[1] = h / 12.0 * (5 * f[0] + 8 * f[1] - f[2]);
  else out[1] = h / 24.0 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
  for (std::size_t k = 2; k < n; ++k) {
    if (k % 2 == 0) out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4 * f[k - 1] + f[k]);
    else out[k] = out[k - 3] + 3.0 * h / 8.0 * (f[k - 3] + 3 * f[k - 2] + 3 * f[k - 1] + f[k]);
  }
  return out;
}

inline std::vector<Vec> gauge_integral(const LieAlgebraData& alg, const std::vector<Mat>& x, double h) {
  const std::vector<Mat> dx = finite_difference(x, h);
  std::vector<Vec> f;
  f.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) f.push_back(from_matrix(alg, x[k].lu().solve(dx[k])).h);
  return cumulative_integral(f, h);
}

}  // namespace detail

struct BCorrection {
  std::vector<CartanPoint> log_b;
  double error_estimate = 0.0;
};

// log b(t) = (q(t) - q0)/2 - int_0^t Pi_h(x^{-1} dx/dt).
// With throw_on_error, a Richardson estimate above tol raises AccuracyError.
inline BCorrection b_correction(const LieAlgebraData& alg, const std::vector<Mat>& x_path,
                                const std::vector<CartanPoint>& q_path, const CartanPoint& q0, double h,
                                double tol = 1e-8, bool throw_on_error = true) {
  if (x_path.size() != q_path.size() || x_path.empty()) throw DimensionError("x and q paths differ in length");
  const std::vector<Vec> fine = detail::gauge_integral(alg, x_path, h);
  BCorrection out;
  if (x_path.size() >= 9) {
    std::vector<Mat> coarse_x;
    for (std::size_t k = 0; k < x_path.size(); k += 2) coarse_x.push_back(x_path[k]);
    const std::vector<Vec> coarse = detail::gauge_integral(alg, coarse_x, 2 * h);
    for (std::size_t k = 0; k < coarse.size(); ++k)
      out.error_estimate = std::max(out.error_estimate, (fine[2 * k] - coarse[k]).cwiseAbs().maxCoeff() / 15.0);
  }
  if (throw_on_error && out.error_estimate > tol)
    throw AccuracyError("b(t) quadrature error estimate " + std::to_string(out.error_estimate) + " exceeds tolerance");
  for (std::size_t k = 0; k < x_path.size(); ++k)
    out.log_b.push_back(0.5 * (q_path[k] - q0) - CartanPoint(fine[k]));
  return out;
}

// ---- grids and solver results ----------------------------------------------

struct UniformGrid {
  double t_max = 0.0;
  std::size_t intervals = 0;

  double step() const { return intervals ? t_max / static_cast<double>(intervals) : 0.0; }
};

// Uniform grid with spacing close to dt and an even number (at least 4) of intervals.
inline UniformGrid make_grid(double t_max, double dt) {
  if (!(t_max >= 0)) throw PreconditionError("t_max must be non-negative");
  if (t_max == 0) return {0.0, 0};
  if (!(dt > 0)) throw PreconditionError("dt must be positive");
  std::size_t n = detail::step_count(t_max, dt);
  n = std::max<std::size_t>(n, 4);
  if (n % 2) ++n;
  return {t_max, n};
}

struct FactorPath {
  std::vector<double> grid;
  std::vector<Mat> k_plus;
  std::vector<Mat> k_minus;
  std::vector<CartanPoint> q_path;
};

template <class State>
struct ExactSolution {
  Trajectory<State> trajectory;
  FactorPath path;
};

struct SolverOptions {
  double b_tolerance = 1e-8;
  double constraint_tolerance = 1e-10;
};

namespace detail {

inline double sup(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

template <class State>
void push_diag(Trajectory<State>& tr, const std::string& k, double v) {
  tr.diagnostics[k].push_back(v);
}

}  // namespace detail

// ---- spin Calogero-Moser on the zero momentum level --------------------------

inline ExactSolution<SpinCMState> solve_spin_cm(const RFamily& r, const SpinCMState& st0, const UniformGrid& grid,
                                                const SolverOptions& opt = {}) {
  const auto& alg = r.alg();
  check_element(alg, st0.xi);
  if (st0.q.size() != alg.rank || st0.p.size() != alg.rank) throw DimensionError("state has wrong dimension");
  if (st0.xi.h.cwiseAbs().maxCoeff() > opt.constraint_tolerance * (1.0 + st0.xi.max_abs()))
    throw PreconditionError("exact spin CM solver needs Pi_h xi = 0");
  check_domain(r, st0.q);

  const ParabolicChart chart = make_chart(r.algebra, r.pi_prime);
  const GElement l0 = lax_L(r, st0);
  const Mat m0 = to_matrix(alg, l0);
  const Mat e0 = torus_element(alg, st0.q);
  const double h = grid.step();

  ExactSolution<SpinCMState> sol;
  auto& tr = sol.trajectory;
  if (grid.intervals == 0) {
    tr.times = {0.0};
    tr.states = {st0};
    sol.path = {{0.0}, {Mat::Identity(alg.rep_dim, alg.rep_dim)}, {Mat::Identity(alg.rep_dim, alg.rep_dim)}, {st0.q}};
    return sol;
  }

  LeviEigenTracker tracker(chart);
  std::vector<Mat> xs, ets, nps;
  std::vector<CartanPoint> qs;
  for (std::size_t k = 0; k <= grid.intervals; ++k) {
    const double t = static_cast<double>(k) * h;
    try {
      const Mat et = mat_exp(t * m0);
      const ParabolicFactors pf = gauss_parabolic(et, chart);
      auto [x, d] = tracker.step(pf.g_levi * e0);
      const CartanPoint q = cartan_log(alg, d);
      xs.push_back(x);
      ets.push_back(et);
      nps.push_back(pf.n_plus);
      qs.push_back(q);
    } catch (const Error& e) {
      tr.failure_time = t;
      tr.failure_reason = e.what();
      break;
    }
  }
  qs[0] = st0.q;
  const BCorrection bc = b_correction(alg, xs, qs, st0.q, h, opt.b_tolerance, !tr.truncated());
  tr.error_estimate = bc.error_estimate;
  tr.accuracy_warning = bc.error_estimate > opt.b_tolerance;

  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double t = static_cast<double>(k) * h;
    if (t > grid.t_max * (1 + 1e-12)) break;
    const Mat kp = xs[k] * torus_element(alg, bc.log_b[k]);
    const Mat kp_inv = kp.inverse();
    const Mat et_inv = ets[k].inverse();
    const Mat km = et_inv * kp;
    const Mat eq = torus_element(alg, qs[k]);
    const Mat km_alt = nps[k] * e0 * kp * eq.inverse();

    SpinCMState st;
    st.q = qs[k];
    st.xi = from_matrix(alg, kp_inv * to_matrix(alg, st0.xi) * kp);
    const GElement lt = from_matrix(alg, kp_inv * m0 * kp);
    st.p = cartan_part(lt) - 0.5 * cartan_part(st.xi);
    if (k == 0) st = st0;

    tr.times.push_back(t);
    tr.states.push_back(st);
    sol.path.grid.push_back(t);
    sol.path.k_plus.push_back(kp);
    sol.path.k_minus.push_back(km);
    sol.path.q_path.push_back(st.q);

    detail::push_diag(tr, "factorization", detail::sup(ets[k] - kp * km_alt.inverse()));
    detail::push_diag(tr, "theta", detail::sup(chart.block_diagonal(km) - e0 * kp * eq.inverse()));
    detail::push_diag(tr, "k_minus_pattern", chart.off_pattern(km, Pattern::PPlus));
    detail::push_diag(tr, "conjugation", detail::sup(kp_inv * m0 * kp - km.inverse() * m0 * km));
    detail::push_diag(tr, "lax_reconstruction", (lt - lax_L(r, st)).max_abs());
    detail::push_diag(tr, "momentum", st.xi.h.cwiseAbs().maxCoeff());
  }
  return sol;
}

inline ExactSolution<ReducedState> solve_reduced_cm(const RFamily& r, const ReducedState& st0, const UniformGrid& grid,
                                                    const SolverOptions& opt = {}) {
  const auto& alg = r.alg();
  check_element(alg, st0.s);
  if (st0.s.h.cwiseAbs().maxCoeff() > opt.constraint_tolerance) throw PreconditionError("reduced spin has an h-part");
  for (int j = 0; j < alg.rank; ++j)
    if (std::abs(st0.s.roots[static_cast<Eigen::Index>(alg.simple(j))] - 1.0) > opt.constraint_tolerance)
      throw PreconditionError("reduced spin must have unit simple-root coefficients");

  const SpinCMState lift{st0.q, st0.p, st0.s};
  const ExactSolution<SpinCMState> full = solve_spin_cm(r, lift, grid, opt);
  const GElement l0 = lax_L(r, lift);

  ExactSolution<ReducedState> sol;
  auto& tr = sol.trajectory;
  tr.failure_time = full.trajectory.failure_time;
  tr.failure_reason = full.trajectory.failure_reason;
  tr.error_estimate = full.trajectory.error_estimate;
  tr.accuracy_warning = full.trajectory.accuracy_warning;
  for (std::size_t k = 0; k < full.trajectory.size(); ++k) {
    const double t = full.trajectory.times[k];
    const SpinCMState& sp = full.trajectory.states[k];
    CartanPoint lg;
    try {
      lg = log_g_of_xi(alg, sp.xi);
    } catch (const Error& e) {
      tr.failure_time = t;
      tr.failure_reason = e.what();
      break;
    }
    ReducedState st;
    st.q = sp.q;
    st.s = torus_adjoint(alg, -lg, sp.xi);
    const Mat& kp = full.path.k_plus[k];
    const GElement lred = torus_adjoint(alg, -lg, from_matrix(alg, kp.inverse() * to_matrix(alg, l0) * kp));
    st.p = cartan_part(lred) + cartan_part(r_pm_apply(r, Sign::Minus, st.q, st.s));
    if (k == 0) st = st0;
    tr.times.push_back(t);
    tr.states.push_back(st);
    for (const auto& [key, v] : full.trajectory.diagnostics) tr.diagnostics[key].push_back(v[k]);
    detail::push_diag(tr, "reduced_lax_reconstruction", (lred - reduced_lax_L(r, st)).max_abs());
    sol.path.grid.push_back(t);
    sol.path.k_plus.push_back(kp * torus_element(alg, lg));
    sol.path.k_minus.push_back(full.path.k_minus[k]);
    sol.path.q_path.push_back(st.q);
  }
  return sol;
}

// ---- spin Toda -------------------------------------------------------------

inline ExactSolution<TodaState> solve_toda(const RFamily& r, const TodaState& st0, const UniformGrid& grid) {
  const auto& alg = r.alg();
  check_element(alg, st0.eta);
  if (st0.x.size() != alg.rank || st0.p.size() != alg.rank) throw DimensionError("state has wrong dimension");
  const Mat m0 = to_matrix(alg, toda_lax_pair(r, st0).first);
  const Mat ex0 = torus_element(alg, st0.x);
  const double h = grid.step();

  ExactSolution<TodaState> sol;
  auto& tr = sol.trajectory;
  for (std::size_t k = 0; k <= grid.intervals; ++k) {
    const double t = static_cast<double>(k) * h;
    TodaState st;
    Mat kp, km, et, recon;
    try {
      et = mat_exp(t * m0);
      const GaussFactors gf = gauss_full(et);
      const CartanPoint lh = cartan_log(alg, gf.h);
      const Mat half = torus_element(alg, 0.5 * lh);
      const Mat half_inv = torus_element(alg, -0.5 * lh);
      kp = gf.n_minus * half;
      km = gf.n_plus * half_inv;
      st.x = st0.x + lh;
      st.eta = torus_adjoint(alg, -0.5 * lh, st0.eta);
      const GElement lt = from_matrix(alg, kp.inverse() * m0 * kp);
      st.p = cartan_part(lt) - 0.5 * cartan_part(st0.eta);
      recon = to_matrix(alg, lt);
    } catch (const Error& e) {
      tr.failure_time = t;
      tr.failure_reason = e.what();
      break;
    }
    if (k == 0) st = st0;
    tr.times.push_back(t);
    tr.states.push_back(st);
    sol.path.grid.push_back(t);
    sol.path.k_plus.push_back(kp);
    sol.path.k_minus.push_back(km);
    sol.path.q_path.push_back(st.x);

    const Mat ex = torus_element(alg, st.x);
    const Mat diag_kp = Mat(kp.diagonal().asDiagonal());
    const Mat diag_km = Mat(km.diagonal().asDiagonal());
    detail::push_diag(tr, "factorization", detail::sup(et - kp * km.inverse()));
    detail::push_diag(tr, "theta", detail::sup(diag_km - ex0 * diag_kp * ex.inverse()));
    detail::push_diag(tr, "conjugation", detail::sup(recon - km.inverse() * m0 * km));
    detail::push_diag(tr, "lax_reconstruction",
                      detail::sup(recon - to_matrix(alg, toda_lax_pair(r, st).first)));
    detail::push_diag(tr, "momentum", (st.eta.h - st0.eta.h).cwiseAbs().maxCoeff());
  }
  return sol;
}

inline ExactSolution<CanonicalState> solve_toda_reduced(const RFamily& r, const CartanPoint& x0, const CartanPoint& p0,
                                                        const Vec& c, const UniformGrid& grid) {
  const TodaState lift{x0, p0, lift_reduced_toda_spin(r, c)};
  const ExactSolution<TodaState> full = solve_toda(r, lift, grid);
  ExactSolution<CanonicalState> sol;
  auto& tr = sol.trajectory;
  tr.failure_time = full.trajectory.failure_time;
  tr.failure_reason = full.trajectory.failure_reason;
  tr.diagnostics = full.trajectory.diagnostics;
  for (std::size_t k = 0; k < full.trajectory.size(); ++k) {
    tr.times.push_back(full.trajectory.times[k]);
    tr.states.push_back({full.trajectory.states[k].x, full.trajectory.states[k].p});
  }
  sol.path = full.path;
  return sol;
}

template <class State>
void attach_monitors(Trajectory<State>& tr, const std::vector<Monitor<State>>& mons) {
  for (const State& s : tr.states) record_monitors(tr, mons, s);
}

}  // namespace dynlax
