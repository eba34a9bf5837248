#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dynlax/liealg.hpp"

namespace dynlax {

enum class Sign { Plus, Minus };

// Hyperbolic dynamical r-matrix attached to a subset pi' of the simple roots.
struct RFamily {
  AlgebraPtr algebra;
  std::vector<int> pi_prime;       // 1-based simple-root indices, sorted
  double k_scale = 0.5;
  double pole_threshold = 1e-8;
  std::vector<char> in_span;       // per root: lies in <pi'>
  std::vector<char> simple_in_pi;  // per simple root (0-based): belongs to pi'

  const LieAlgebraData& alg() const { return *algebra; }
  bool in_levi(std::size_t a) const { return in_span[a] != 0; }
};

inline RFamily make_rfamily(AlgebraPtr alg, std::vector<int> pi_prime, double pole_threshold = 1e-8) {
  if (!alg) throw PreconditionError("null algebra");
  std::sort(pi_prime.begin(), pi_prime.end());
  pi_prime.erase(std::unique(pi_prime.begin(), pi_prime.end()), pi_prime.end());
  RFamily r;
  r.algebra = alg;
  r.pole_threshold = pole_threshold;
  r.simple_in_pi.assign(static_cast<std::size_t>(alg->rank), 0);
  for (int i : pi_prime) {
    if (i < 1 || i > alg->rank)
      throw DimensionError("pi' index " + std::to_string(i) + " outside 1.." + std::to_string(alg->rank));
    r.simple_in_pi[static_cast<std::size_t>(i - 1)] = 1;
  }
  r.pi_prime = std::move(pi_prime);
  r.in_span.assign(alg->num_roots(), 0);
  for (std::size_t a = 0; a < alg->num_roots(); ++a) {
    bool ok = true;
    for (int k = 0; k < alg->rank; ++k)
      if (alg->roots[a].coords[static_cast<std::size_t>(k)] != 0 && !r.simple_in_pi[static_cast<std::size_t>(k)])
        ok = false;
    r.in_span[a] = ok ? 1 : 0;
  }
  return r;
}

inline void check_domain(const RFamily& r, const CartanPoint& q) {
  const auto& alg = r.alg();
  if (q.size() != alg.rank) throw DimensionError("q has wrong length");
  for (std::size_t a = 0; a < alg.num_positive(); ++a)
    if (r.in_levi(a) && std::abs(alg.alpha(a, q)) < r.pole_threshold)
      throw DomainViolation("alpha(q) vanishes for root " + root_key(alg, a));
}

inline double phi_alpha(const RFamily& r, std::size_t a, const CartanPoint& q) {
  const auto& alg = r.alg();
  if (!r.in_levi(a)) return alg.roots[a].positive ? 0.5 : -0.5;
  const double v = alg.alpha(a, q);
  if (std::abs(v) < r.pole_threshold) throw DomainViolation("alpha(q) vanishes for root " + root_key(alg, a));
  return 0.5 / std::tanh(0.5 * v);
}

inline GElement r_apply(const RFamily& r, const CartanPoint& q, const GElement& x) {
  const auto& alg = r.alg();
  check_element(alg, x);
  check_domain(r, q);
  GElement y = zero_element(alg);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    y.roots[ia] = -phi_alpha(r, a, q) * x.roots[ia];
  }
  return y;
}

inline GElement r_pm_apply(const RFamily& r, Sign sign, const CartanPoint& q, const GElement& x) {
  GElement y = r_apply(r, q, x);
  return sign == Sign::Plus ? y + r.k_scale * x : y - r.k_scale * x;
}

inline GElement dr_apply(const RFamily& r, const CartanPoint& q, const CartanPoint& lambda, const GElement& x) {
  const auto& alg = r.alg();
  check_element(alg, x);
  check_domain(r, q);
  GElement y = zero_element(alg);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    if (!r.in_levi(a)) continue;
    const double s = std::sinh(0.5 * alg.alpha(a, q));
    const auto ia = static_cast<Eigen::Index>(a);
    y.roots[ia] = 0.25 * alg.alpha(a, lambda) / (s * s) * x.roots[ia];
  }
  return y;
}

// Gradient in q of (R(q)a, b).
inline CartanPoint dr_pairing_gradient(const RFamily& r, const CartanPoint& q, const GElement& a, const GElement& b) {
  const auto& alg = r.alg();
  CartanPoint g = CartanPoint::zero(alg.rank);
  for (std::size_t c = 0; c < alg.num_roots(); ++c) {
    if (!r.in_levi(c)) continue;
    const double s = std::sinh(0.5 * alg.alpha(c, q));
    const double w = 0.25 / (s * s) * a.roots[static_cast<Eigen::Index>(c)] *
                     b.roots[static_cast<Eigen::Index>(alg.negative_of[c])];
    g += alg.coroot(c) * w;
  }
  return g;
}

// Left side of the modified dynamical Yang-Baxter equation (no K term).
inline GElement mdybe_lhs(const RFamily& r, const CartanPoint& q, const GElement& a, const GElement& b) {
  const auto& alg = r.alg();
  const GElement ra = r_apply(r, q, a);
  const GElement rb = r_apply(r, q, b);
  GElement res = bracket(alg, ra, rb);
  res += r_apply(r, q, bracket(alg, rb, a) - bracket(alg, ra, b));
  res += dr_apply(r, q, cartan_part(a), b);
  res -= dr_apply(r, q, cartan_part(b), a);
  res += cartan_element(alg, dr_pairing_gradient(r, q, a, b));
  return res;
}

inline GElement mdybe_residual(const RFamily& r, const CartanPoint& q, const GElement& a, const GElement& b) {
  return mdybe_lhs(r, q, a, b) + (r.k_scale * r.k_scale) * bracket(r.alg(), a, b);
}

// Residual of the algebroid r-matrix identity for the constant sections (a, z), (a2, z2).
inline std::pair<GElement, CartanPoint> algebroid_identity_residual(const RFamily& r, const CartanPoint& q,
                                                                    const GElement& a, const CartanPoint& z,
                                                                    const GElement& a2, const CartanPoint& z2) {
  const auto& alg = r.alg();
  const GElement u = r_apply(r, q, a) - cartan_element(alg, z);
  const GElement u2 = r_apply(r, q, a2) - cartan_element(alg, z2);
  const GElement cross = bracket(alg, u, a2) - bracket(alg, u2, a);
  GElement res = dr_apply(r, q, cartan_part(a), a2) - dr_apply(r, q, cartan_part(a2), a);
  res += bracket(alg, u, u2);
  res += cartan_element(alg, dr_pairing_gradient(r, q, a, a2));
  res -= r_apply(r, q, cross);
  res += (r.k_scale * r.k_scale) * bracket(alg, a, a2);
  return {res, -cartan_part(cross)};
}

inline GElement const_r_apply(const LieAlgebraData& alg, const GElement& x) {
  check_element(alg, x);
  GElement y = zero_element(alg);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    y.roots[ia] = (alg.roots[a].positive ? -0.5 : 0.5) * x.roots[ia];
  }
  return y;
}

}  // namespace dynlax
