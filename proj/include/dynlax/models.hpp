#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dynlax/dynr.hpp"
#include "dynlax/poisson.hpp"

namespace dynlax {

// ---- states ---------------------------------------------------------------

struct SpinCMState {
  CartanPoint q;
  CartanPoint p;
  GElement xi;
};

struct ReducedState {
  CartanPoint q;
  CartanPoint p;
  GElement s;
};

struct TodaState {
  CartanPoint x;
  CartanPoint p;
  GElement eta;
};

// Canonical pair (x, p) of the reduced Toda lattice.
struct CanonicalState {
  CartanPoint x;
  CartanPoint p;
};

#define DYNLAX_STATE_OPS(T, A, B, C)                                                  \
  inline T operator+(const T& u, const T& v) { return {u.A + v.A, u.B + v.B, u.C + v.C}; } \
  inline T operator-(const T& u, const T& v) { return {u.A - v.A, u.B - v.B, u.C - v.C}; } \
  inline T operator*(double s, const T& u) { return {s * u.A, s * u.B, s * u.C}; }          \
  inline Vec pack(const T& u) {                                                       \
    Vec z(u.A.coeffs.size() + u.B.coeffs.size() + u.C.h.size() + u.C.roots.size());   \
    z << u.A.coeffs, u.B.coeffs, u.C.h, u.C.roots;                                    \
    return z;                                                                         \
  }

DYNLAX_STATE_OPS(SpinCMState, q, p, xi)
DYNLAX_STATE_OPS(ReducedState, q, p, s)
DYNLAX_STATE_OPS(TodaState, x, p, eta)
#undef DYNLAX_STATE_OPS

inline CanonicalState operator+(const CanonicalState& u, const CanonicalState& v) { return {u.x + v.x, u.p + v.p}; }
inline CanonicalState operator-(const CanonicalState& u, const CanonicalState& v) { return {u.x - v.x, u.p - v.p}; }
inline CanonicalState operator*(double s, const CanonicalState& u) { return {s * u.x, s * u.p}; }
inline Vec pack(const CanonicalState& u) {
  Vec z(u.x.coeffs.size() + u.p.coeffs.size());
  z << u.x.coeffs, u.p.coeffs;
  return z;
}

template <class S>
double max_abs_diff(const S& a, const S& b) {
  const Vec d = pack(a) - pack(b);
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

// ---- spin Calogero-Moser --------------------------------------------------

enum class Variant { Plus, Minus };

inline double spin_cm_hamiltonian(const RFamily& r, const SpinCMState& st, Variant v = Variant::Plus) {
  const auto& alg = r.alg();
  check_domain(r, st.q);
  double h = 0.5 * st.p.coeffs.squaredNorm() + 0.125 * st.xi.h.squaredNorm();
  h += (v == Variant::Plus ? 0.5 : -0.5) * st.p.coeffs.dot(st.xi.h);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    if (!r.in_levi(a)) continue;
    const double s = std::sinh(0.5 * alg.alpha(a, st.q));
    h -= 0.125 * st.xi.roots[static_cast<Eigen::Index>(a)] *
         st.xi.roots[static_cast<Eigen::Index>(alg.negative_of[a])] / (s * s);
  }
  return h;
}

inline GElement lax_L(const RFamily& r, const SpinCMState& st, Variant v = Variant::Plus) {
  const Sign s = v == Variant::Plus ? Sign::Minus : Sign::Plus;
  return cartan_element(r.alg(), st.p) - r_pm_apply(r, s, st.q, st.xi);
}

inline SpinCMState spin_cm_eom_rhs(const RFamily& r, const SpinCMState& st) {
  const auto& alg = r.alg();
  SpinCMState d;
  d.q = st.p + 0.5 * cartan_part(st.xi);
  d.p = CartanPoint::zero(alg.rank);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    if (!r.in_levi(a)) continue;
    const double v = 0.5 * alg.alpha(a, st.q);
    const double s = std::sinh(v);
    const double w = st.xi.roots[static_cast<Eigen::Index>(a)] * st.xi.roots[static_cast<Eigen::Index>(alg.negative_of[a])];
    d.p -= alg.coroot(a) * (0.125 * std::cosh(v) / (s * s * s) * w);
  }
  d.xi = bracket(alg, st.xi, r_pm_apply(r, Sign::Plus, st.q, lax_L(r, st)));
  return d;
}

// dL/dt along the flow (chain rule) minus ([L, R(q)L] - dR(q)(Pi_h xi) L).
inline GElement quasi_lax_residual(const RFamily& r, const SpinCMState& st) {
  const auto& alg = r.alg();
  const SpinCMState d = spin_cm_eom_rhs(r, st);
  const GElement ldot = cartan_element(alg, d.p) - dr_apply(r, st.q, d.q, st.xi) -
                        r_pm_apply(r, Sign::Minus, st.q, d.xi);
  const GElement l = lax_L(r, st);
  const GElement rhs = bracket(alg, l, r_apply(r, st.q, l)) - dr_apply(r, st.q, cartan_part(st.xi), l);
  return ldot - rhs;
}

inline CartanPoint momentum_J(const SpinCMState& st) { return -cartan_part(st.xi); }

// log g(xi) as an element of h: sum_{i,j} C_ji log xi_{alpha_j} h_{alpha_i}.
inline CartanPoint log_g_of_xi(const LieAlgebraData& alg, const GElement& xi) {
  check_element(alg, xi);
  Vec logs(alg.rank);
  for (int j = 0; j < alg.rank; ++j) {
    const double c = xi.roots[static_cast<Eigen::Index>(alg.simple(j))];
    if (!(c > 0.0))
      throw ChartError("simple-root coefficient " + std::to_string(j + 1) + " is not positive");
    logs[j] = std::log(c);
  }
  CartanPoint h = CartanPoint::zero(alg.rank);
  for (int i = 0; i < alg.rank; ++i) {
    double w = 0.0;
    for (int j = 0; j < alg.rank; ++j) w += alg.cartan_inverse(j, i) * logs[j];
    const std::size_t ai = alg.simple(i);
    h += alg.coroot(ai) * (w * 2.0 / alg.root_norm2(ai));
  }
  return h;
}

inline Mat g_of_xi(const LieAlgebraData& alg, const GElement& xi) {
  return torus_element(alg, log_g_of_xi(alg, xi));
}

inline double default_constraint_tol(const GElement& x) { return 1e-12 * (1.0 + x.max_abs()); }

inline ReducedState reduce_state(const RFamily& r, const SpinCMState& st) {
  const auto& alg = r.alg();
  if (st.xi.h.cwiseAbs().maxCoeff() > default_constraint_tol(st.xi))
    throw PreconditionError("reduce_state requires Pi_h xi = 0");
  const CartanPoint lg = log_g_of_xi(alg, st.xi);
  GElement s = torus_adjoint(alg, -lg, st.xi);
  s.h.setZero();
  return {st.q, st.p, s};
}

inline double reduced_hamiltonian(const RFamily& r, const ReducedState& st) {
  const auto& alg = r.alg();
  check_domain(r, st.q);
  double h = 0.5 * st.p.coeffs.squaredNorm();
  for (std::size_t a = 0; a < alg.num_positive(); ++a) {
    if (!r.in_levi(a)) continue;
    const double s = std::sinh(0.5 * alg.alpha(a, st.q));
    h -= 0.25 * st.s.roots[static_cast<Eigen::Index>(a)] * st.s.roots[static_cast<Eigen::Index>(alg.negative_of[a])] /
         (s * s);
  }
  return h;
}

inline bool is_pi_prime_root(const RFamily& r, std::size_t a) {
  const auto& alg = r.alg();
  for (int k = 0; k < alg.rank; ++k)
    if (alg.simple(k) == a) return r.simple_in_pi[static_cast<std::size_t>(k)] != 0;
  return false;
}

// The element M with ds/dt = [s, M] on the reduced space.
inline GElement reduced_M(const RFamily& r, const ReducedState& st) {
  const auto& alg = r.alg();
  GElement m = zero_element(alg);
  std::vector<double> inv_sinh2(alg.num_roots(), 0.0);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    if (!r.in_levi(a)) continue;
    const double s = std::sinh(0.5 * alg.alpha(a, st.q));
    inv_sinh2[a] = 1.0 / (s * s);
    m.roots[static_cast<Eigen::Index>(a)] = -0.25 * st.s.roots[static_cast<Eigen::Index>(a)] * inv_sinh2[a];
  }
  for (int j = 0; j < alg.rank; ++j) {
    const std::size_t aj = alg.simple(j);
    double inner = 0.0;
    for (std::size_t a = 0; a < alg.num_roots(); ++a) {
      if (!r.in_levi(a)) continue;
      if (is_pi_prime_root(r, a)) continue;
      std::vector<int> diff = alg.roots[aj].coords;
      for (int k = 0; k < alg.rank; ++k) diff[static_cast<std::size_t>(k)] -= alg.roots[a].coords[static_cast<std::size_t>(k)];
      auto it = alg.index_by_coords.find(diff);
      if (it == alg.index_by_coords.end()) continue;
      const std::size_t b = it->second;
      inner += alg.structure_constants(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
               st.s.roots[static_cast<Eigen::Index>(a)] * st.s.roots[static_cast<Eigen::Index>(b)] * inv_sinh2[a];
    }
    for (int i = 0; i < alg.rank; ++i) {
      const std::size_t ai = alg.simple(i);
      m.h += 0.25 * alg.cartan_inverse(j, i) * inner * (2.0 / alg.root_norm2(ai)) * alg.coroot(ai).coeffs;
    }
  }
  return m;
}

inline ReducedState reduced_eom_rhs(const RFamily& r, const ReducedState& st) {
  const auto& alg = r.alg();
  check_domain(r, st.q);
  ReducedState d;
  d.q = st.p;
  d.p = CartanPoint::zero(alg.rank);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    if (!r.in_levi(a)) continue;
    const double v = 0.5 * alg.alpha(a, st.q);
    const double s = std::sinh(v);
    const double w = st.s.roots[static_cast<Eigen::Index>(a)] * st.s.roots[static_cast<Eigen::Index>(alg.negative_of[a])];
    d.p -= alg.coroot(a) * (0.125 * std::cosh(v) / (s * s * s) * w);
  }
  d.s = bracket(alg, st.s, reduced_M(r, st));
  return d;
}

// L = p - R^-(q) s evaluated on the reduced space.
inline GElement reduced_lax_L(const RFamily& r, const ReducedState& st) {
  return lax_L(r, SpinCMState{st.q, st.p, st.s});
}

// ---- spin Toda ------------------------------------------------------------

inline double toda_hamiltonian(const RFamily& r, const TodaState& st) {
  const auto& alg = r.alg();
  double h = 0.5 * st.p.coeffs.squaredNorm() + 0.125 * st.eta.h.squaredNorm() + 0.5 * st.p.coeffs.dot(st.eta.h);
  for (int i = 0; i < alg.rank; ++i) {
    if (!r.simple_in_pi[static_cast<std::size_t>(i)]) continue;
    const std::size_t a = alg.simple(i);
    h -= st.eta.roots[static_cast<Eigen::Index>(a)] * st.eta.roots[static_cast<Eigen::Index>(alg.negative_of[a])] *
         std::exp(-alg.alpha(a, st.x));
  }
  return h;
}

inline TodaState toda_eom_rhs(const RFamily& r, const TodaState& st) {
  const auto& alg = r.alg();
  TodaState d;
  d.x = st.p + 0.5 * cartan_part(st.eta);
  d.p = CartanPoint::zero(alg.rank);
  for (int i = 0; i < alg.rank; ++i) {
    if (!r.simple_in_pi[static_cast<std::size_t>(i)]) continue;
    const std::size_t a = alg.simple(i);
    const double w = st.eta.roots[static_cast<Eigen::Index>(a)] * st.eta.roots[static_cast<Eigen::Index>(alg.negative_of[a])];
    d.p -= alg.coroot(a) * (std::exp(-alg.alpha(a, st.x)) * w);
  }
  d.eta = bracket(alg, st.eta, cartan_element(alg, 0.25 * cartan_part(st.eta) + 0.5 * st.p));
  return d;
}

inline std::pair<GElement, GElement> toda_lax_pair(const RFamily& r, const TodaState& st) {
  const auto& alg = r.alg();
  GElement l = cartan_element(alg, st.p + 0.5 * cartan_part(st.eta));
  GElement m = zero_element(alg);
  for (int i = 0; i < alg.rank; ++i) {
    const std::size_t a = alg.simple(i);
    const std::size_t na = alg.negative_of[a];
    const auto ia = static_cast<Eigen::Index>(a), ina = static_cast<Eigen::Index>(na);
    l.roots[ia] = st.eta.roots[ia];
    m.roots[ia] = -0.5 * st.eta.roots[ia];
    if (r.simple_in_pi[static_cast<std::size_t>(i)]) {
      const double c = std::exp(-alg.alpha(a, st.x)) * st.eta.roots[ina];
      l.roots[ina] = -c;
      m.roots[ina] = -0.5 * c;
    }
  }
  return {l, m};
}

// d/dt of the Toda Lax matrix along toda_eom_rhs minus [L, M].
inline GElement toda_lax_residual(const RFamily& r, const TodaState& st) {
  const auto& alg = r.alg();
  const TodaState d = toda_eom_rhs(r, st);
  GElement ldot = cartan_element(alg, d.p + 0.5 * cartan_part(d.eta));
  for (int i = 0; i < alg.rank; ++i) {
    const std::size_t a = alg.simple(i);
    const auto ia = static_cast<Eigen::Index>(a), ina = static_cast<Eigen::Index>(alg.negative_of[a]);
    ldot.roots[ia] = d.eta.roots[ia];
    if (r.simple_in_pi[static_cast<std::size_t>(i)]) {
      const double e = std::exp(-alg.alpha(a, st.x));
      ldot.roots[ina] = e * alg.alpha(a, d.x) * st.eta.roots[ina] - e * d.eta.roots[ina];
    }
  }
  const auto [l, m] = toda_lax_pair(r, st);
  return ldot - bracket(alg, l, m);
}

inline SpinCMState scale_state(const TodaState& st, double tau, const LieAlgebraData& alg) {
  if (tau < 0) throw PreconditionError("tau must be non-negative");
  SpinCMState s;
  s.q = st.x + (2.0 * tau) * weyl_vector_w(alg);
  s.p = st.p;
  s.xi = GElement(st.eta.h, std::exp(tau) * st.eta.roots);
  return s;
}

// Ad_{exp(-tau w)} L(scale_state(st, tau)).
inline GElement gauged_lax(const RFamily& r, const TodaState& st, double tau) {
  const auto& alg = r.alg();
  return torus_adjoint(alg, -tau * weyl_vector_w(alg), lax_L(r, scale_state(st, tau, alg)));
}

// ---- reduced Toda ---------------------------------------------------------

// c holds one constant per simple root (0-based); entries outside pi' are ignored.
inline double reduced_toda_hamiltonian(const RFamily& r, const CanonicalState& st, const Vec& c) {
  const auto& alg = r.alg();
  double h = 0.5 * st.p.coeffs.squaredNorm();
  for (int i = 0; i < alg.rank; ++i)
    if (r.simple_in_pi[static_cast<std::size_t>(i)]) h -= c[i] * std::exp(-alg.alpha(alg.simple(i), st.x));
  return h;
}

inline CanonicalState reduced_toda_rhs(const RFamily& r, const CanonicalState& st, const Vec& c) {
  const auto& alg = r.alg();
  CanonicalState d{st.p, CartanPoint::zero(alg.rank)};
  for (int i = 0; i < alg.rank; ++i) {
    if (!r.simple_in_pi[static_cast<std::size_t>(i)]) continue;
    const std::size_t a = alg.simple(i);
    d.p -= alg.coroot(a) * (c[i] * std::exp(-alg.alpha(a, st.x)));
  }
  return d;
}

// Spin with eta_a eta_{-a} = c_a on pi', the sign carried by eta_{-a}.
inline GElement lift_reduced_toda_spin(const RFamily& r, const Vec& c) {
  const auto& alg = r.alg();
  if (c.size() != alg.rank) throw DimensionError("need one constant per simple root");
  GElement eta = zero_element(alg);
  for (int i = 0; i < alg.rank; ++i) {
    if (!r.simple_in_pi[static_cast<std::size_t>(i)]) continue;
    const std::size_t a = alg.simple(i);
    const double m = std::sqrt(std::abs(c[i]));
    eta.roots[static_cast<Eigen::Index>(a)] = m;
    eta.roots[static_cast<Eigen::Index>(alg.negative_of[a])] = c[i] >= 0 ? m : -m;
  }
  return eta;
}

// ---- the map rho(x, p, eta) = (x, -Pi_h eta, L(x, p, eta)) ----------------

inline Point3 rho_map(const RFamily& r, const Point3& pt) {
  const TodaState st{pt.q, pt.l, pt.X};
  return {pt.q, -cartan_part(pt.X), toda_lax_pair(r, st).first};
}

// f o rho with chain-rule partials, for f on the constant-r algebroid dual.
inline SmoothFunction3 pullback_rho(const RFamily& r, const SmoothFunction3& f) {
  auto rp = std::make_shared<RFamily>(r);
  SmoothFunction3 g;
  g.eval = [rp, f](const Point3& pt) { return f.eval(rho_map(*rp, pt)); };
  g.d1 = [rp, f](const Point3& pt) {
    const auto& alg = rp->alg();
    const Point3 y = rho_map(*rp, pt);
    const GElement df = f.d(y);
    CartanPoint out = f.d1(y);
    for (int i = 0; i < alg.rank; ++i) {
      if (!rp->simple_in_pi[static_cast<std::size_t>(i)]) continue;
      const std::size_t a = alg.simple(i);
      const double w = std::exp(-alg.alpha(a, pt.q)) * pt.X.roots[static_cast<Eigen::Index>(alg.negative_of[a])] *
                       df.roots[static_cast<Eigen::Index>(a)];
      out += alg.coroot(a) * w;
    }
    return out;
  };
  g.d2 = [rp, f](const Point3& pt) { return cartan_part(f.d(rho_map(*rp, pt))); };
  g.d = [rp, f](const Point3& pt) {
    const auto& alg = rp->alg();
    const Point3 y = rho_map(*rp, pt);
    const GElement df = f.d(y);
    GElement out = zero_element(alg);
    out.h = -f.d2(y).coeffs + 0.5 * df.h;
    for (int i = 0; i < alg.rank; ++i) {
      const std::size_t a = alg.simple(i);
      const auto ia = static_cast<Eigen::Index>(a), ina = static_cast<Eigen::Index>(alg.negative_of[a]);
      out.roots[ina] = df.roots[ina];
      if (rp->simple_in_pi[static_cast<std::size_t>(i)])
        out.roots[ia] = -std::exp(-alg.alpha(a, pt.q)) * df.roots[ia];
    }
    return out;
  };
  return g;
}

// The Toda Hamiltonian as a function on S* with analytic partials.
inline SmoothFunction3 toda_hamiltonian_function(const RFamily& r) {
  auto rp = std::make_shared<RFamily>(r);
  SmoothFunction3 f;
  f.eval = [rp](const Point3& pt) { return toda_hamiltonian(*rp, {pt.q, pt.l, pt.X}); };
  f.d1 = [rp](const Point3& pt) { return -toda_eom_rhs(*rp, {pt.q, pt.l, pt.X}).p; };
  f.d2 = [](const Point3& pt) { return pt.l + 0.5 * cartan_part(pt.X); };
  f.d = [rp](const Point3& pt) {
    const auto& alg = rp->alg();
    GElement g = cartan_element(alg, 0.25 * cartan_part(pt.X) + 0.5 * pt.l);
    for (int i = 0; i < alg.rank; ++i) {
      if (!rp->simple_in_pi[static_cast<std::size_t>(i)]) continue;
      const std::size_t a = alg.simple(i);
      const auto ia = static_cast<Eigen::Index>(a), ina = static_cast<Eigen::Index>(alg.negative_of[a]);
      const double e = std::exp(-alg.alpha(a, pt.q));
      g.roots[ina] = -e * pt.X.roots[ina];
      g.roots[ia] = -e * pt.X.roots[ia];
    }
    return g;
  };
  return f;
}

// The spin CM Hamiltonian as a function of (q, p, xi) with analytic partials.
inline SmoothFunction3 spin_cm_hamiltonian_function(const RFamily& r) {
  auto rp = std::make_shared<RFamily>(r);
  SmoothFunction3 f;
  f.eval = [rp](const Point3& pt) { return spin_cm_hamiltonian(*rp, {pt.q, pt.l, pt.X}); };
  f.d1 = [rp](const Point3& pt) { return -spin_cm_eom_rhs(*rp, {pt.q, pt.l, pt.X}).p; };
  f.d2 = [](const Point3& pt) { return pt.l + 0.5 * cartan_part(pt.X); };
  f.d = [rp](const Point3& pt) {
    const auto& alg = rp->alg();
    GElement g = cartan_element(alg, 0.25 * cartan_part(pt.X) + 0.5 * pt.l);
    for (std::size_t a = 0; a < alg.num_roots(); ++a) {
      if (!rp->in_levi(a)) continue;
      const double s = std::sinh(0.5 * alg.alpha(a, pt.q));
      // d/dxi_b of -(1/8) sum xi_a xi_{-a}/sinh^2 is -(1/4) xi_{-b}/sinh^2; it sits on e_{-b}.
      const std::size_t na = alg.negative_of[a];
      g.roots[static_cast<Eigen::Index>(na)] = -0.25 * pt.X.roots[static_cast<Eigen::Index>(na)] / (s * s);
    }
    return g;
  };
  return f;
}

}  // namespace dynlax
