#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dynlax/models.hpp"
#include "dynlax/numint.hpp"
#include "dynlax/sampling.hpp"

namespace dynlax {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  std::map<std::string, std::vector<double>> series;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(std::string name, double value, double tol, std::string note = {}) {
    checks.push_back({std::move(name), value, tol, value <= tol, std::move(note)});
  }
};

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"mdybe", "algebroid", "poisson-axioms", "lax", "scaling", "reduction"};
  return s;
}

struct VerifyOptions {
  int cases = 100;
  // Overrides every threshold of the suite when positive.
  double tolerance = 0.0;
  std::vector<double> taus{3.0, 5.0, 7.0};
};

namespace detail {

inline double tol_or(const VerifyOptions& o, double t) { return o.tolerance > 0 ? o.tolerance : t; }

}  // namespace detail

// ---- r-matrix identities ---------------------------------------------------

inline SuiteReport verify_mdybe(const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  const auto& alg = r.alg();
  double worst = 0.0;
  for (int n = 0; n < o.cases; ++n) {
    const CartanPoint q = random_domain_point(r, rng);
    const GElement a = random_element(alg, rng), b = random_element(alg, rng);
    worst = std::max(worst, mdybe_residual(r, q, a, b).max_abs());
  }
  SuiteReport rep{"mdybe", {}, {}};
  rep.add("mdybe_residual", worst, detail::tol_or(o, 1e-10));
  return rep;
}

inline SuiteReport verify_algebroid(const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  const auto& alg = r.alg();
  double wg = 0.0, wh = 0.0;
  for (int n = 0; n < o.cases; ++n) {
    const CartanPoint q = random_domain_point(r, rng);
    const GElement a = random_element(alg, rng), a2 = random_element(alg, rng);
    const CartanPoint z = random_cartan(alg, rng), z2 = random_cartan(alg, rng);
    const auto [g, h] = algebroid_identity_residual(r, q, a, z, a2, z2);
    wg = std::max(wg, g.max_abs());
    wh = std::max(wh, h.coeffs.cwiseAbs().maxCoeff());
  }
  SuiteReport rep{"algebroid", {}, {}};
  rep.add("algebroid_g_component", wg, detail::tol_or(o, 1e-10));
  rep.add("algebroid_h_component", wh, detail::tol_or(o, 1e-10));
  return rep;
}

// ---- Poisson structures ------------------------------------------------------

using BracketFn = std::function<double(const SmoothFunction3&, const SmoothFunction3&, const Point3&)>;
using FieldFn = std::function<Tangent3(const SmoothFunction3&, const Point3&)>;

// {g, h} as a function of the point, with partials by finite differences.
inline SmoothFunction3 bracket_as_function(AlgebraPtr alg, const BracketFn& br, const SmoothFunction3& g,
                                           const SmoothFunction3& h) {
  return numeric_function(alg, [br, g, h](const Point3& p) { return br(g, h, p); }, 1e-3);
}

struct AxiomResiduals {
  double antisymmetry = 0.0;
  double leibniz = 0.0;
  double jacobi = 0.0;
  double field = 0.0;
};

template <class PointGen>
AxiomResiduals poisson_axioms(AlgebraPtr alg, const BracketFn& br, const FieldFn& vf, const PointGen& point, Rng& rng,
                              int cases) {
  AxiomResiduals res;
  for (int n = 0; n < cases; ++n) {
    const Point3 pt = point(rng);
    const SmoothFunction3 f = random_polynomial(alg, rng, 0.5), g = random_polynomial(alg, rng, 0.5),
                          h = random_polynomial(alg, rng, 0.5);
    const double fg = br(f, g, pt);
    res.antisymmetry = std::max(res.antisymmetry, std::abs(fg + br(g, f, pt)));
    res.leibniz = std::max(res.leibniz,
                           std::abs(br(f, product(g, h), pt) - fg * h.eval(pt) - g.eval(pt) * br(f, h, pt)));
    res.field = std::max(res.field, std::abs(fg - directional(*alg, g, pt, vf(f, pt))));
    const double jac = br(f, bracket_as_function(alg, br, g, h), pt) + br(g, bracket_as_function(alg, br, h, f), pt) +
                       br(h, bracket_as_function(alg, br, f, g), pt);
    res.jacobi = std::max(res.jacobi, std::abs(jac));
  }
  return res;
}

// {f o rho, g o rho}_{S*} - {f, g}_A o rho, relative to 1 + |rhs|.
inline double rho_poisson_residual(const RFamily& r, Rng& rng, int cases) {
  const auto& alg = r.alg();
  double worst = 0.0;
  for (int n = 0; n < cases; ++n) {
    const SmoothFunction3 f = random_polynomial(r.algebra, rng, 0.5), g = random_polynomial(r.algebra, rng, 0.5);
    const Point3 pt{random_cartan(alg, rng, 0.5), random_cartan(alg, rng), random_element(alg, rng)};
    const double lhs = bracket_Sstar(alg, pullback_rho(r, f), pullback_rho(r, g), pt);
    const double rhs = bracket_boldA(alg, f, g, rho_map(r, pt));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

struct InvariantResiduals {
  double at_zero = 0.0;          // max |{Pr3* f1, Pr3* f2}| at lambda = 0
  double fd_mismatch = 0.0;      // closed form vs finite-difference bracket at generic lambda
  double smallest_generic = 0.0; // min |closed form| at generic lambda
};

inline InvariantResiduals invariant_residuals(const RFamily& r, Rng& rng, int cases) {
  const auto& alg = r.alg();
  const int n_max = alg.rep_dim;
  InvariantResiduals res;
  res.smallest_generic = INFINITY;
  const auto num = [&](const InvariantFunction& f) {
    AlgebraPtr a = r.algebra;
    return numeric_function(a, [a, f](const Point3& p) { return f.value(to_matrix(*a, p.X)); });
  };
  for (int n = 0; n < cases; ++n) {
    const int k1 = 2 + n % (n_max - 1 > 0 ? n_max - 1 : 1);
    const int k2 = k1 == n_max ? 2 : k1 + 1;
    const InvariantFunction f1 = trace_power(k1), f2 = trace_power(k2);
    Point3 pt{random_domain_point(r, rng), random_cartan(alg, rng), random_element(alg, rng)};
    const double closed = invariant_bracket(r, f1, f2, pt);
    res.fd_mismatch = std::max(res.fd_mismatch, std::abs(closed - bracket_AGamma(r, num(f1), num(f2), pt)));
    res.smallest_generic = std::min(res.smallest_generic, std::abs(closed));
    pt.l = CartanPoint::zero(alg.rank);
    res.at_zero = std::max(res.at_zero, std::abs(bracket_AGamma(r, pullback_pr3(r.algebra, f1),
                                                                pullback_pr3(r.algebra, f2), pt)));
  }
  return res;
}

inline SuiteReport verify_poisson(const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  AlgebraPtr alg = r.algebra;
  auto rp = std::make_shared<RFamily>(r);
  SuiteReport rep{"poisson-axioms", {}, {}};
  const auto agamma_point = [rp](Rng& g) {
    const auto& a = rp->alg();
    return Point3{random_domain_point(*rp, g), random_cartan(a, g), random_element(a, g)};
  };
  const auto flat_point = [alg](Rng& g) {
    return Point3{random_cartan(*alg, g), random_cartan(*alg, g), random_element(*alg, g)};
  };
  struct Entry {
    std::string name;
    BracketFn br;
    FieldFn vf;
    bool dynamical;
  };
  const std::vector<Entry> entries{
      {"AGamma", [rp](auto& f, auto& g, auto& p) { return bracket_AGamma(*rp, f, g, p); },
       [rp](auto& f, auto& p) { return ham_vf_AGamma(*rp, f, p); }, true},
      {"Sstar", [alg](auto& f, auto& g, auto& p) { return bracket_Sstar(*alg, f, g, p); },
       [alg](auto& f, auto& p) { return ham_vf_Sstar(*alg, f, p); }, false},
      {"boldA", [alg](auto& f, auto& g, auto& p) { return bracket_boldA(*alg, f, g, p); },
       [alg](auto& f, auto& p) { return ham_vf_boldA(*alg, f, p); }, false},
  };
  const int cases = std::max(1, o.cases / 10);
  for (const auto& e : entries) {
    const AxiomResiduals a = e.dynamical ? poisson_axioms(alg, e.br, e.vf, agamma_point, rng, cases)
                                         : poisson_axioms(alg, e.br, e.vf, flat_point, rng, cases);
    rep.add(e.name + "_antisymmetry", a.antisymmetry, detail::tol_or(o, 1e-9));
    rep.add(e.name + "_leibniz", a.leibniz, detail::tol_or(o, 1e-9));
    rep.add(e.name + "_jacobi", a.jacobi, detail::tol_or(o, 1e-7));
    rep.add(e.name + "_hamiltonian_field", a.field, detail::tol_or(o, 1e-8));
  }
  rep.add("rho_poisson_map", rho_poisson_residual(r, rng, o.cases), detail::tol_or(o, 1e-8));
  const InvariantResiduals inv = invariant_residuals(r, rng, o.cases);
  rep.add("invariants_commute_at_zero", inv.at_zero, detail::tol_or(o, 1e-10));
  rep.add("invariant_bracket_vs_fd", inv.fd_mismatch, detail::tol_or(o, 1e-6));
  return rep;
}

// ---- Lax equations -------------------------------------------------------------

inline SuiteReport verify_lax(const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  const auto& alg = r.alg();
  double quasi = 0.0, dr_zero = 0.0, toda = 0.0, m_is_rl = 0.0;
  for (int n = 0; n < o.cases; ++n) {
    const SpinCMState st = random_spin_cm_state(r, rng, n % 2 == 0);
    quasi = std::max(quasi, quasi_lax_residual(r, st).max_abs());
    const SpinCMState z = random_spin_cm_state(r, rng, true);
    dr_zero = std::max(dr_zero, dr_apply(r, z.q, cartan_part(z.xi), lax_L(r, z)).max_abs());
    const TodaState ts = random_toda_state(r, rng);
    toda = std::max(toda, toda_lax_residual(r, ts).max_abs());
    const auto [l, m] = toda_lax_pair(r, ts);
    m_is_rl = std::max(m_is_rl, (m - const_r_apply(alg, l)).max_abs());
  }
  SuiteReport rep{"lax", {}, {}};
  rep.add("quasi_lax_residual", quasi, detail::tol_or(o, 1e-8));
  rep.add("dr_term_on_zero_level", dr_zero, 0.0);
  rep.add("toda_lax_residual", toda, detail::tol_or(o, 1e-8));
  rep.add("toda_M_equals_RL", m_is_rl, detail::tol_or(o, 1e-12));
  return rep;
}

// ---- scaling limit -------------------------------------------------------------

// Sup over roots of |R(x + 2 tau w) - R_const| as a diagonal operator.
inline double r_scaling_deviation(const RFamily& r, const CartanPoint& x, double tau) {
  const auto& alg = r.alg();
  const CartanPoint q = x + (2.0 * tau) * weyl_vector_w(alg);
  double e = 0.0;
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    const double c = alg.roots[a].positive ? -0.5 : 0.5;
    e = std::max(e, std::abs(-phi_alpha(r, a, q) - c));
  }
  return e;
}

struct ScalingRates {
  double hamiltonian = 0.0;  // 0 means the deviation vanishes identically
  double lax = 0.0;
  double r_matrix = 0.0;
};

// Leading decay exponents per unit tau, read off from the large-tau expansion of
// 1/sinh^2 and coth for each root of height l.
inline ScalingRates predicted_scaling_rates(const RFamily& r, const GElement& eta) {
  const auto& alg = r.alg();
  ScalingRates s;
  const auto upd = [](double& cur, double v) { cur = (cur == 0.0) ? v : std::max(cur, v); };
  for (std::size_t a = 0; a < alg.num_positive(); ++a) {
    const int l = alg.roots[a].height;
    const double ea = eta.roots[static_cast<Eigen::Index>(a)];
    const double ena = eta.roots[static_cast<Eigen::Index>(alg.negative_of[a])];
    if (r.in_levi(a)) {
      upd(s.r_matrix, -2.0 * l);
      if (ea * ena != 0.0) upd(s.hamiltonian, l == 1 ? -2.0 : -2.0 * (l - 1));
      if (l == 1 && (ea != 0.0 || ena != 0.0)) upd(s.lax, -2.0);
    }
    if (l >= 2) {
      if (ea != 0.0 || (r.in_levi(a) && ena != 0.0)) upd(s.lax, -(l - 1.0));
    }
  }
  return s;
}

struct ScalingSeries {
  std::vector<double> taus;
  std::vector<double> hamiltonian;
  std::vector<double> lax;
  std::vector<double> r_matrix;
};

inline ScalingSeries scaling_series(const RFamily& r, const TodaState& st, const std::vector<double>& taus) {
  const auto& alg = r.alg();
  ScalingSeries s;
  s.taus = taus;
  const double hs = toda_hamiltonian(r, st);
  const GElement l = toda_lax_pair(r, st).first;
  for (double tau : taus) {
    s.hamiltonian.push_back(std::abs(spin_cm_hamiltonian(r, scale_state(st, tau, alg)) - hs));
    s.lax.push_back((gauged_lax(r, st, tau) - l).max_abs());
    s.r_matrix.push_back(r_scaling_deviation(r, st.x, tau));
  }
  return s;
}

struct RateCheck {
  bool monotone = true;
  double worst_relative_error = 0.0;  // max over consecutive pairs of |slope / predicted - 1|
  std::vector<double> slopes;
};

inline RateCheck check_rate(const std::vector<double>& taus, const std::vector<double>& dev, double predicted) {
  RateCheck c;
  for (std::size_t k = 1; k < dev.size(); ++k) {
    if (!(dev[k] < dev[k - 1])) c.monotone = false;
    const double slope = std::log(dev[k] / dev[k - 1]) / (taus[k] - taus[k - 1]);
    c.slopes.push_back(slope);
    c.worst_relative_error = std::max(c.worst_relative_error, std::abs(slope / predicted - 1.0));
  }
  return c;
}

inline SuiteReport verify_scaling(const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  SuiteReport rep{"scaling", {}, {}};
  double non_monotone = 0.0, vanishing = 0.0, worst_h = 0.0, worst_l = 0.0, worst_r = 0.0, toda = 0.0;
  const int cases = std::max(1, o.cases / 10);
  for (int n = 0; n < cases; ++n) {
    const TodaState st = random_toda_state(r, rng);
    const ScalingRates pr = predicted_scaling_rates(r, st.eta);
    const ScalingSeries s = scaling_series(r, st, o.taus);
    if (n == 0) {
      rep.series["tau"] = s.taus;
      rep.series["hamiltonian_deviation"] = s.hamiltonian;
      rep.series["lax_deviation"] = s.lax;
      rep.series["r_matrix_deviation"] = s.r_matrix;
      rep.series["predicted_rates"] = {pr.hamiltonian, pr.lax, pr.r_matrix};
    }
    const auto use = [&](const std::vector<double>& dev, double pred, double& worst) {
      if (pred == 0.0) {
        for (double d : dev) vanishing = std::max(vanishing, d);
        return;
      }
      const RateCheck c = check_rate(s.taus, dev, pred);
      if (!c.monotone) non_monotone += 1.0;
      worst = std::max(worst, c.worst_relative_error);
    };
    use(s.hamiltonian, pr.hamiltonian, worst_h);
    use(s.lax, pr.lax, worst_l);
    use(s.r_matrix, pr.r_matrix, worst_r);
    toda = std::max(toda, toda_lax_residual(r, st).max_abs());
  }
  rep.add("non_monotone_series", non_monotone, 0.0);
  rep.add("deviation_without_rate", vanishing, 1e-12);
  rep.add("hamiltonian_rate_relative_error", worst_h, 0.25);
  rep.add("lax_rate_relative_error", worst_l, 0.25);
  rep.add("r_matrix_rate_relative_error", worst_r, 0.25);
  rep.add("toda_lax_residual", toda, detail::tol_or(o, 1e-8));
  return rep;
}

// ---- reduction -------------------------------------------------------------------

inline SuiteReport verify_reduction(const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  const auto& alg = r.alg();
  double simple_rate = 0.0, normalization = 0.0, commute = 0.0;
  const auto flow = [&](const SpinCMState& st, double t) {
    SpinCMState y = st;
    for (int i = 0; i < 20; ++i) y = rk4_step([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); }, y, t / 20);
    return y;
  };
  for (int n = 0; n < o.cases; ++n) {
    const ReducedState d = reduced_eom_rhs(r, random_reduced_state(r, rng));
    for (int j = 0; j < alg.rank; ++j)
      simple_rate = std::max(simple_rate, std::abs(d.s.roots[static_cast<Eigen::Index>(alg.simple(j))]));
    const SpinCMState st = random_spin_cm_state(r, rng);
    const ReducedState red = reduce_state(r, st);
    for (int j = 0; j < alg.rank; ++j)
      normalization = std::max(normalization, std::abs(red.s.roots[static_cast<Eigen::Index>(alg.simple(j))] - 1.0));
    if (n < std::max(1, o.cases / 10)) {
      const double h = 1e-3;
      const auto at = [&](double t) { return reduce_state(r, flow(st, t)); };
      const ReducedState fd = (1.0 / (12 * h)) * ((8.0 * (at(h) - at(-h))) - (at(2 * h) - at(-2 * h)));
      commute = std::max(commute, max_abs_diff(fd, reduced_eom_rhs(r, red)));
    }
  }
  SuiteReport rep{"reduction", {}, {}};
  rep.add("simple_root_rate", simple_rate, detail::tol_or(o, 1e-9));
  rep.add("simple_root_normalization", normalization, detail::tol_or(o, 1e-12));
  rep.add("reduction_commutes_with_flow", commute, detail::tol_or(o, 1e-6));
  return rep;
}

inline SuiteReport run_suite(const std::string& name, const RFamily& r, Rng& rng, const VerifyOptions& o = {}) {
  if (name == "mdybe") return verify_mdybe(r, rng, o);
  if (name == "algebroid") return verify_algebroid(r, rng, o);
  if (name == "poisson-axioms") return verify_poisson(r, rng, o);
  if (name == "lax") return verify_lax(r, rng, o);
  if (name == "scaling") return verify_scaling(r, rng, o);
  if (name == "reduction") return verify_reduction(r, rng, o);
  throw ValidationError("unknown verify suite '" + name + "'");
}

}  // namespace dynlax
