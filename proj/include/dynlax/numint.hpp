#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynlax/models.hpp"

namespace dynlax {

template <class State>
struct Monitor {
  std::string name;
  // A monitor may produce several columns; they are stored as name, or name[k].
  std::function<std::vector<double>(const State&)> eval;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<std::string> monitor_names;      // column names in insertion order
  std::map<std::string, std::vector<double>> monitors;
  std::optional<double> failure_time;           // first time at which the run could not continue
  std::string failure_reason;
  double error_estimate = 0.0;
  bool accuracy_warning = false;
  std::map<std::string, std::vector<double>> diagnostics;  // per-sample solver residuals

  std::size_t size() const { return times.size(); }
  bool truncated() const { return failure_time.has_value(); }
};

template <class State>
struct IntegratorConfig {
  double dt = 1e-3;
  double t_max = 1.0;
  std::vector<Monitor<State>> monitors;
  double tolerance = 1e-8;
  bool estimate_error = true;
};

template <class State>
void record_monitors(Trajectory<State>& tr, const std::vector<Monitor<State>>& mons, const State& st) {
  for (const auto& m : mons) {
    const std::vector<double> v = m.eval(st);
    if (v.size() == 1) {
      if (!tr.monitors.count(m.name)) tr.monitor_names.push_back(m.name);
      tr.monitors[m.name].push_back(v[0]);
      continue;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string key = m.name + "[" + std::to_string(k) + "]";
      if (!tr.monitors.count(key)) tr.monitor_names.push_back(key);
      tr.monitors[key].push_back(v[k]);
    }
  }
}

template <class State, class Rhs>
State rk4_step(const Rhs& f, const State& y, double h) {
  const State k1 = f(y);
  const State k2 = f(y + (0.5 * h) * k1);
  const State k3 = f(y + (0.5 * h) * k2);
  const State k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {

inline std::size_t step_count(double t_max, double dt) {
  if (!(dt > 0)) throw PreconditionError("dt must be positive");
  if (!(t_max >= 0)) throw PreconditionError("t_max must be non-negative");
  const double n = t_max / dt;
  const auto k = static_cast<std::size_t>(std::llround(n));
  if (std::abs(n - static_cast<double>(k)) < 1e-9 * std::max(1.0, n)) return k;
  return static_cast<std::size_t>(std::ceil(n));
}

// Plain fixed-step run; stops at the first step that throws.
template <class State, class Rhs>
std::vector<State> rk4_run(const Rhs& f, const State& y0, double h, std::size_t steps, std::size_t& done,
                           std::string& why) {
  std::vector<State> out{y0};
  out.reserve(steps + 1);
  done = 0;
  State y = y0;
  for (std::size_t i = 0; i < steps; ++i) {
    try {
      y = rk4_step(f, y, h);
    } catch (const Error& e) {
      why = e.what();
      return out;
    }
    if (!pack(y).allFinite()) {
      why = "non-finite state";
      return out;
    }
    out.push_back(y);
    ++done;
  }
  return out;
}

}  // namespace detail

// Fixed-step RK4 on [0, t_max]. The last step is shortened if dt does not divide t_max.
// The global error is estimated by repeating the run at dt/2 (Richardson, order 4).
template <class State, class Rhs>
Trajectory<State> integrate(const Rhs& rhs, const State& st0, const IntegratorConfig<State>& cfg) {
  const std::size_t steps = detail::step_count(cfg.t_max, cfg.dt);
  const double h = steps ? cfg.t_max / static_cast<double>(steps) : cfg.dt;
  Trajectory<State> tr;
  std::size_t done = 0;
  std::string why;
  tr.states = detail::rk4_run(rhs, st0, h, steps, done, why);
  for (std::size_t i = 0; i <= done; ++i) tr.times.push_back(static_cast<double>(i) * h);
  if (done < steps) {
    tr.failure_time = static_cast<double>(done + 1) * h;
    tr.failure_reason = why;
  }
  for (const State& s : tr.states) record_monitors(tr, cfg.monitors, s);

  if (cfg.estimate_error && done > 0) {
    std::size_t done2 = 0;
    std::string why2;
    const std::vector<State> fine = detail::rk4_run(rhs, st0, 0.5 * h, 2 * done, done2, why2);
    if (done2 == 2 * done) {
      double e = 0.0;
      for (std::size_t i = 0; i <= done; ++i) e = std::max(e, max_abs_diff(tr.states[i], fine[2 * i]));
      tr.error_estimate = e * 16.0 / 15.0;
    } else {
      tr.error_estimate = INFINITY;
    }
    tr.accuracy_warning = !(tr.error_estimate <= cfg.tolerance);
  }
  return tr;
}

// ---- monitors -------------------------------------------------------------

// Eigenvalues of a real matrix sorted by (real, imaginary) part.
inline std::vector<std::complex<double>> sorted_spectrum(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

inline std::vector<double> spectrum_columns(const Mat& m) {
  std::vector<double> out;
  for (const auto& z : sorted_spectrum(m)) out.push_back(z.real());
  for (const auto& z : sorted_spectrum(m)) out.push_back(z.imag());
  return out;
}

// tr(L^k) for k = 2..n.
inline std::vector<double> trace_powers(const Mat& m) {
  std::vector<double> out;
  Mat p = m;
  for (Eigen::Index k = 2; k <= m.rows(); ++k) {
    p = p * m;
    out.push_back(p.trace());
  }
  return out;
}

inline const std::vector<std::string>& system_tags() {
  static const std::vector<std::string> tags{"spin-cm", "reduced-cm", "spin-toda", "reduced-toda"};
  return tags;
}

// Standard monitor names per system; throws on an unknown tag.
inline std::vector<std::string> monitor_suite(std::string_view tag) {
  if (tag == "spin-cm") return {"H", "momentum_norm", "spec_L"};
  if (tag == "reduced-cm") return {"H0", "simple_s", "spec_L"};
  if (tag == "spin-toda" || tag == "toda") return {"Hs", "momentum_norm", "spec_L"};
  if (tag == "reduced-toda") return {"Hs0"};
  throw ValidationError("unknown system tag '" + std::string(tag) + "'");
}

inline std::vector<Monitor<SpinCMState>> spin_cm_monitors(const RFamily& r) {
  return {{"H", [r](const SpinCMState& s) { return std::vector<double>{spin_cm_hamiltonian(r, s)}; }},
          {"momentum_norm", [](const SpinCMState& s) { return std::vector<double>{momentum_J(s).norm()}; }},
          {"spec_L", [r](const SpinCMState& s) { return spectrum_columns(to_matrix(r.alg(), lax_L(r, s))); }}};
}

inline std::vector<Monitor<ReducedState>> reduced_cm_monitors(const RFamily& r) {
  return {{"H0", [r](const ReducedState& s) { return std::vector<double>{reduced_hamiltonian(r, s)}; }},
          {"simple_s",
           [r](const ReducedState& s) {
             std::vector<double> v;
             for (int j = 0; j < r.alg().rank; ++j) v.push_back(s.s.roots[static_cast<Eigen::Index>(r.alg().simple(j))]);
             return v;
           }},
          {"spec_L", [r](const ReducedState& s) { return spectrum_columns(to_matrix(r.alg(), reduced_lax_L(r, s))); }}};
}

inline std::vector<Monitor<TodaState>> toda_monitors(const RFamily& r) {
  return {{"Hs", [r](const TodaState& s) { return std::vector<double>{toda_hamiltonian(r, s)}; }},
          {"momentum_norm", [](const TodaState& s) { return std::vector<double>{s.eta.h.norm()}; }},
          {"spec_L",
           [r](const TodaState& s) { return spectrum_columns(to_matrix(r.alg(), toda_lax_pair(r, s).first)); }}};
}

inline std::vector<Monitor<CanonicalState>> reduced_toda_monitors(const RFamily& r, const Vec& c) {
  return {{"Hs0", [r, c](const CanonicalState& s) { return std::vector<double>{reduced_toda_hamiltonian(r, s, c)}; }}};
}

}  // namespace dynlax
