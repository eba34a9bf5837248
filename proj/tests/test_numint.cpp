#include <gtest/gtest.h>

#include <cmath>

#include "dynlax/numint.hpp"
#include "dynlax/sampling.hpp"

using namespace dynlax;

namespace {

template <class State, class Rhs>
State run(const Rhs& f, const State& y0, double t_max, double dt) {
  IntegratorConfig<State> cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.estimate_error = false;
  return integrate(f, y0, cfg).states.back();
}

// log2 of successive difference ratios under dt-halving.
template <class State, class Rhs>
double measured_order(const Rhs& f, const State& y0, double t_max, double dt) {
  const State a = run(f, y0, t_max, dt), b = run(f, y0, t_max, dt / 2), c = run(f, y0, t_max, dt / 4);
  return std::log2(max_abs_diff(a, b) / max_abs_diff(b, c));
}

double drift(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e = std::max(e, std::abs(x - v.front()));
  return e;
}

double column_drift(const std::map<std::string, std::vector<double>>& m, const std::string& prefix) {
  double e = 0.0;
  for (const auto& [k, v] : m)
    if (k.rfind(prefix, 0) == 0) e = std::max(e, drift(v));
  return e;
}

}  // namespace

TEST(Integrate, ZeroRhsIsConstant) {
  auto alg = build_algebra(Series::A, 2);
  Rng rng(1);
  const CanonicalState st{random_cartan(*alg, rng), random_cartan(*alg, rng)};
  IntegratorConfig<CanonicalState> cfg;
  cfg.dt = 0.1;
  cfg.t_max = 1.0;
  const auto tr = integrate([&](const CanonicalState&) { return CanonicalState{CartanPoint::zero(2), CartanPoint::zero(2)}; },
                            st, cfg);
  ASSERT_EQ(tr.size(), 11u);
  for (const auto& s : tr.states) EXPECT_EQ(max_abs_diff(s, st), 0.0);
  EXPECT_EQ(tr.error_estimate, 0.0);
  EXPECT_FALSE(tr.accuracy_warning);
  for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_GT(tr.times[k], tr.times[k - 1]);
  EXPECT_NEAR(tr.times.back(), 1.0, 1e-15);
}

TEST(Integrate, HarmonicOscillatorFourthOrder) {
  auto alg = build_algebra(Series::A, 1);
  const CanonicalState st{CartanPoint(Vec::Constant(1, 1.0)), CartanPoint::zero(1)};
  const auto f = [](const CanonicalState& s) { return CanonicalState{s.p, -1.0 * s.x}; };
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) err.push_back(std::abs(run(f, st, 2.0, dt).x[0] - std::cos(2.0)));
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double order = std::log2(err[k - 1] / err[k]);
    EXPECT_GT(order, 3.7);
    EXPECT_LT(order, 4.3);
  }
}

TEST(Integrate, ShortensLastStep) {
  const CanonicalState st{CartanPoint::zero(1), CartanPoint(Vec::Constant(1, 1.0))};
  IntegratorConfig<CanonicalState> cfg;
  cfg.dt = 0.3;
  cfg.t_max = 1.0;
  const auto tr = integrate([](const CanonicalState& s) { return CanonicalState{s.p, CartanPoint::zero(1)}; }, st, cfg);
  EXPECT_NEAR(tr.times.back(), 1.0, 1e-15);
  EXPECT_NEAR(tr.states.back().x[0], 1.0, 1e-15);
  cfg.dt = -1;
  EXPECT_THROW(integrate([](const CanonicalState& s) { return s; }, st, cfg), PreconditionError);
}

TEST(Integrate, FreeSpinCM) {
  auto alg = build_algebra(Series::A, 3);
  const RFamily r = make_rfamily(alg, {1, 2, 3});
  Rng rng(2);
  SpinCMState st = random_spin_cm_state(r, rng);
  st.xi = zero_element(*alg);
  const SpinCMState end = run([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); }, st, 1.0, 1e-2);
  EXPECT_LT((end.q - (st.q + st.p)).norm(), 1e-12);
}

TEST(Integrate, TruncatesOnDomainViolation) {
  auto alg = build_algebra(Series::A, 1);
  const CanonicalState st{CartanPoint::zero(1), CartanPoint(Vec::Constant(1, 1.0))};
  IntegratorConfig<CanonicalState> cfg;
  cfg.dt = 0.1;
  cfg.t_max = 1.0;
  const auto tr = integrate(
      [](const CanonicalState& s) {
        if (s.x[0] > 0.45) throw DomainViolation("wall");
        return CanonicalState{s.p, CartanPoint::zero(1)};
      },
      st, cfg);
  ASSERT_TRUE(tr.truncated());
  EXPECT_NEAR(*tr.failure_time, 0.5, 1e-12);
  EXPECT_EQ(tr.size(), 5u);
  EXPECT_EQ(tr.failure_reason, "wall");
}

TEST(Integrate, AccuracyWarning) {
  const CanonicalState st{CartanPoint(Vec::Constant(1, 1.0)), CartanPoint::zero(1)};
  IntegratorConfig<CanonicalState> cfg;
  cfg.dt = 0.2;
  cfg.t_max = 2.0;
  cfg.tolerance = 1e-12;
  const auto f = [](const CanonicalState& s) { return CanonicalState{s.p, -1.0 * s.x}; };
  const auto tr = integrate(f, st, cfg);
  EXPECT_TRUE(tr.accuracy_warning);
  // the step-halving estimate tracks the true error of the returned run within a small factor
  double true_err = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    true_err = std::max({true_err, std::abs(tr.states[k].x[0] - std::cos(t)), std::abs(tr.states[k].p[0] + std::sin(t))});
  }
  EXPECT_GT(tr.error_estimate, 0.5 * true_err);
  EXPECT_LT(tr.error_estimate, 2.0 * true_err);
  cfg.tolerance = 1e-3;
  EXPECT_FALSE(integrate(f, st, cfg).accuracy_warning);
}

TEST(ConvergenceOrder, AllSystems) {
  Rng rng(3);
  auto alg = build_algebra(Series::A, 2);
  const RFamily r = make_rfamily(alg, {1, 2});
  const double dt = 0.1;
  const auto in_range = [](double o) { return o > 3.7 && o < 4.3; };
  const double o1 =
      measured_order([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); }, random_spin_cm_state(r, rng, false), 1.0, dt);
  const double o2 =
      measured_order([&](const ReducedState& s) { return reduced_eom_rhs(r, s); }, random_reduced_state(r, rng), 1.0, dt);
  const double o3 = measured_order([&](const TodaState& s) { return toda_eom_rhs(r, s); }, random_toda_state(r, rng), 1.0, dt);
  // c < 0 is the repulsive lattice; c > 0 collapses in finite time
  const Vec c = rng.uniform_vec(2, -1.5, -0.5);
  const double o4 = measured_order([&](const CanonicalState& s) { return reduced_toda_rhs(r, s, c); },
                                   CanonicalState{random_cartan(*alg, rng), random_cartan(*alg, rng)}, 1.0, dt);
  EXPECT_PRED1(in_range, o1);
  EXPECT_PRED1(in_range, o2);
  EXPECT_PRED1(in_range, o3);
  EXPECT_PRED1(in_range, o4);
}

TEST(MonitorSuite, Catalog) {
  EXPECT_EQ(monitor_suite("spin-cm"), (std::vector<std::string>{"H", "momentum_norm", "spec_L"}));
  EXPECT_EQ(monitor_suite("toda"), monitor_suite("spin-toda"));
  EXPECT_EQ(monitor_suite("reduced-cm")[0], "H0");
  EXPECT_EQ(monitor_suite("reduced-cm")[1], "simple_s");
  EXPECT_THROW(monitor_suite("kepler"), ValidationError);
  auto alg = build_algebra(Series::A, 2);
  const RFamily r = make_rfamily(alg, {1});
  std::vector<std::string> names;
  for (const auto& m : spin_cm_monitors(r)) names.push_back(m.name);
  EXPECT_EQ(names, monitor_suite("spin-cm"));
  names.clear();
  for (const auto& m : toda_monitors(r)) names.push_back(m.name);
  EXPECT_EQ(names, monitor_suite("spin-toda"));
  names.clear();
  for (const auto& m : reduced_cm_monitors(r)) names.push_back(m.name);
  EXPECT_EQ(names, monitor_suite("reduced-cm"));
}

TEST(Monitors, ColumnsAndLengths) {
  auto alg = build_algebra(Series::A, 2);
  const RFamily r = make_rfamily(alg, {1, 2});
  Rng rng(4);
  IntegratorConfig<SpinCMState> cfg;
  cfg.dt = 0.1;
  cfg.t_max = 0.5;
  cfg.monitors = spin_cm_monitors(r);
  const auto tr = integrate([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); }, random_spin_cm_state(r, rng), cfg);
  EXPECT_EQ(tr.monitor_names.size(), 2u + 6u);
  EXPECT_EQ(tr.monitor_names[2], "spec_L[0]");
  for (const auto& [k, v] : tr.monitors) EXPECT_EQ(v.size(), tr.size()) << k;
}

class Conservation : public ::testing::TestWithParam<int> {};

TEST_P(Conservation, SpinCM) {
  const int rank = GetParam();
  auto alg = build_algebra(Series::A, rank);
  Rng rng(10 + static_cast<std::uint64_t>(rank));
  std::vector<int> all;
  for (int i = 1; i <= rank; ++i) all.push_back(i);
  for (const auto& pp : {all, std::vector<int>{1}}) {
    const RFamily r = make_rfamily(alg, pp);
    IntegratorConfig<SpinCMState> cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 1.0;
    cfg.estimate_error = false;
    cfg.monitors = spin_cm_monitors(r);
    cfg.monitors.push_back({"trL", [r](const SpinCMState& s) { return trace_powers(to_matrix(r.alg(), lax_L(r, s))); }});
    cfg.monitors.push_back({"xi_h", [](const SpinCMState& s) { return std::vector<double>(s.xi.h.data(), s.xi.h.data() + s.xi.h.size()); }});
    const auto tr = integrate([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); }, random_spin_cm_state(r, rng), cfg);
    ASSERT_FALSE(tr.truncated());
    EXPECT_LE(drift(tr.monitors.at("H")), 1e-8);
    EXPECT_LE(column_drift(tr.monitors, "xi_h"), 1e-9);
    EXPECT_LE(column_drift(tr.monitors, "spec_L"), 1e-7);
    EXPECT_LE(column_drift(tr.monitors, "trL"), 1e-8);
  }
}

TEST_P(Conservation, SpinCMOffZeroLevelKeepsEnergyAndMomentum) {
  const int rank = GetParam();
  auto alg = build_algebra(Series::A, rank);
  Rng rng(20 + static_cast<std::uint64_t>(rank));
  const RFamily r = make_rfamily(alg, {1});
  IntegratorConfig<SpinCMState> cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 1.0;
  cfg.estimate_error = false;
  cfg.monitors = spin_cm_monitors(r);
  cfg.monitors.push_back({"xi_h", [](const SpinCMState& s) { return std::vector<double>(s.xi.h.data(), s.xi.h.data() + s.xi.h.size()); }});
  const auto tr = integrate([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); }, random_spin_cm_state(r, rng, false), cfg);
  EXPECT_LE(drift(tr.monitors.at("H")), 1e-8);
  EXPECT_LE(column_drift(tr.monitors, "xi_h"), 1e-9);
}

TEST_P(Conservation, ReducedCM) {
  const int rank = GetParam();
  auto alg = build_algebra(Series::A, rank);
  Rng rng(30 + static_cast<std::uint64_t>(rank));
  std::vector<int> all;
  for (int i = 1; i <= rank; ++i) all.push_back(i);
  const RFamily r = make_rfamily(alg, all);
  IntegratorConfig<ReducedState> cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 1.0;
  cfg.estimate_error = false;
  cfg.monitors = reduced_cm_monitors(r);
  const auto tr = integrate([&](const ReducedState& s) { return reduced_eom_rhs(r, s); }, random_reduced_state(r, rng), cfg);
  EXPECT_LE(drift(tr.monitors.at("H0")), 1e-8);
  EXPECT_LE(column_drift(tr.monitors, "spec_L"), 1e-7);
  for (const auto& [k, v] : tr.monitors)
    if (k.rfind("simple_s", 0) == 0)
      for (double x : v) EXPECT_NEAR(x, 1.0, 1e-9);
}

TEST_P(Conservation, SpinToda) {
  const int rank = GetParam();
  auto alg = build_algebra(Series::A, rank);
  Rng rng(40 + static_cast<std::uint64_t>(rank));
  std::vector<int> all;
  for (int i = 1; i <= rank; ++i) all.push_back(i);
  for (const auto& pp : {all, std::vector<int>{1}}) {
    const RFamily r = make_rfamily(alg, pp);
    IntegratorConfig<TodaState> cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 1.0;
    cfg.estimate_error = false;
    cfg.monitors = toda_monitors(r);
    cfg.monitors.push_back({"trL", [r](const TodaState& s) { return trace_powers(to_matrix(r.alg(), toda_lax_pair(r, s).first)); }});
    cfg.monitors.push_back({"eta_h", [](const TodaState& s) { return std::vector<double>(s.eta.h.data(), s.eta.h.data() + s.eta.h.size()); }});
    const auto tr = integrate([&](const TodaState& s) { return toda_eom_rhs(r, s); }, random_toda_state(r, rng, true), cfg);
    EXPECT_LE(drift(tr.monitors.at("Hs")), 1e-8);
    EXPECT_LE(column_drift(tr.monitors, "eta_h"), 1e-9);
    EXPECT_LE(column_drift(tr.monitors, "spec_L"), 1e-7);
    EXPECT_LE(column_drift(tr.monitors, "trL"), 1e-8);
  }
}

TEST_P(Conservation, ReducedToda) {
  const int rank = GetParam();
  auto alg = build_algebra(Series::A, rank);
  Rng rng(50 + static_cast<std::uint64_t>(rank));
  std::vector<int> all;
  for (int i = 1; i <= rank; ++i) all.push_back(i);
  const RFamily r = make_rfamily(alg, all);
  const Vec c = rng.uniform_vec(rank, -1.0, 1.0);
  IntegratorConfig<CanonicalState> cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 1.0;
  cfg.estimate_error = false;
  cfg.monitors = reduced_toda_monitors(r, c);
  const auto tr = integrate([&](const CanonicalState& s) { return reduced_toda_rhs(r, s, c); },
                            CanonicalState{random_cartan(*alg, rng, 0.5), random_cartan(*alg, rng, 0.5)}, cfg);
  EXPECT_LE(drift(tr.monitors.at("Hs0")), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Ranks, Conservation, ::testing::Values(1, 2, 3));
