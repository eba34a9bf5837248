#pragma once

#include "dynlax/models.hpp"
#include "dynlax/random.hpp"

namespace dynlax {

// Random q with |alpha(q)| >= min_gap on the Levi span, by rejection.
inline CartanPoint random_domain_point(const RFamily& r, Rng& rng, double scale = 2.0, double min_gap = 0.5) {
  const auto& alg = r.alg();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const CartanPoint q = random_cartan(alg, rng, scale);
    bool ok = true;
    for (std::size_t a = 0; a < alg.num_positive(); ++a)
      if (r.in_levi(a) && std::abs(alg.alpha(a, q)) < min_gap) ok = false;
    if (ok) return q;
  }
  throw PreconditionError("could not sample a point in the domain");
}

// Spin on the zero momentum level: positive coefficients on positive roots,
// negative ones on negative roots (repulsive couplings).
inline GElement random_repulsive_spin(const LieAlgebraData& alg, Rng& rng, double lo = 0.3, double hi = 1.0) {
  GElement xi = zero_element(alg);
  for (std::size_t a = 0; a < alg.num_roots(); ++a) {
    const double v = rng.uniform(lo, hi);
    xi.roots[static_cast<Eigen::Index>(a)] = alg.roots[a].positive ? v : -v;
  }
  return xi;
}

// Ordered position q with alpha_i(q) in [gap, gap + spread] for every simple root.
inline CartanPoint random_ordered_point(const LieAlgebraData& alg, Rng& rng, double gap = 1.0, double spread = 1.0) {
  Vec d(alg.rep_dim);
  d[0] = 0.0;
  for (int i = 1; i < alg.rep_dim; ++i) d[i] = d[i - 1] - rng.uniform(gap, gap + spread);
  d.array() -= d.mean();
  return cartan_part(from_matrix(alg, Mat(d.asDiagonal())));
}

inline SpinCMState random_spin_cm_state(const RFamily& r, Rng& rng, bool zero_level = true) {
  const auto& alg = r.alg();
  SpinCMState st;
  st.q = random_ordered_point(alg, rng);
  st.p = random_cartan(alg, rng, 0.5);
  st.xi = random_repulsive_spin(alg, rng);
  if (!zero_level) st.xi.h = rng.uniform_vec(alg.rank, -0.5, 0.5);
  return st;
}

inline ReducedState random_reduced_state(const RFamily& r, Rng& rng) {
  const auto& alg = r.alg();
  ReducedState st;
  st.q = random_ordered_point(alg, rng);
  st.p = random_cartan(alg, rng, 0.5);
  st.s = random_repulsive_spin(alg, rng);
  for (int j = 0; j < alg.rank; ++j) st.s.roots[static_cast<Eigen::Index>(alg.simple(j))] = 1.0;
  return st;
}

inline TodaState random_toda_state(const RFamily& r, Rng& rng, bool zero_level = false) {
  const auto& alg = r.alg();
  TodaState st;
  st.x = random_cartan(alg, rng, 0.5);
  st.p = random_cartan(alg, rng, 0.5);
  st.eta = random_repulsive_spin(alg, rng);
  if (!zero_level) st.eta.h = rng.uniform_vec(alg.rank, -0.5, 0.5);
  return st;
}

}  // namespace dynlax
