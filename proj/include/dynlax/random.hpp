#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dynlax/liealg.hpp"

namespace dynlax {

// mt19937_64 is fully specified by the standard, but the std distributions are
// not, so the real-valued draws are done by hand to keep seeds portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(th);
    has_spare_ = true;
    return rad * std::cos(th);
  }

  Vec uniform_vec(Eigen::Index n, double a, double b) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(a, b);
    return v;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline CartanPoint random_cartan(const LieAlgebraData& alg, Rng& rng, double scale = 1.0) {
  return CartanPoint(rng.uniform_vec(alg.rank, -scale, scale));
}

inline GElement random_element(const LieAlgebraData& alg, Rng& rng, double scale = 1.0) {
  return GElement(rng.uniform_vec(alg.rank, -scale, scale),
                  rng.uniform_vec(static_cast<Eigen::Index>(alg.num_roots()), -scale, scale));
}

}  // namespace dynlax
