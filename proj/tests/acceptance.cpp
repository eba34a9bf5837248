// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dynlax/dynlax.hpp"
#include "oracles.hpp"

using namespace dynlax;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<int> all_simple(int rank) {
  std::vector<int> v;
  for (int i = 1; i <= rank; ++i) v.push_back(i);
  return v;
}

RFamily family(int rank, std::vector<int> pi_prime) { return make_rfamily(build_algebra(Series::A, rank), pi_prime); }

// Largest value of a named check over several suite reports.
struct Worst {
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  void add(const Check& c) {
    value = std::max(value, c.value);
    tolerance = c.tolerance;
    pass = pass && c.pass;
  }
};

template <class State>
struct PairRun {
  double deviation = 0.0;
  double diagnostics = 0.0;
  bool complete = true;
  std::vector<State> exact, rk4;
};

// Exact solution on a uniform grid against RK4 with `sub` steps per grid interval.
template <class State, class Rhs>
PairRun<State> exact_vs_rk4(const ExactSolution<State>& sol, const Rhs& rhs, const State& st0, const UniformGrid& g,
                            std::size_t sub) {
  PairRun<State> out;
  out.complete = !sol.trajectory.truncated() && sol.trajectory.size() == g.intervals + 1;
  out.exact = sol.trajectory.states;
  out.rk4 = dynlax::testing::rk4_reference(rhs, st0, g.step() / static_cast<double>(sub), g.intervals * sub, sub);
  for (std::size_t k = 0; k < std::min(out.exact.size(), out.rk4.size()); ++k)
    out.deviation = std::max(out.deviation, max_abs_diff(out.exact[k], out.rk4[k]));
  for (const auto& [name, v] : sol.trajectory.diagnostics)
    for (double d : v) out.diagnostics = std::max(out.diagnostics, d);
  return out;
}

double g_diagnostics = 0.0;  // worst solver diagnostic over criteria 4-6
int g_exact_runs = 0;

Outcome criterion1() {
  Worst w;
  int configs = 0;
  for (int rank = 1; rank <= 3; ++rank) {
    std::vector<std::vector<int>> subsets{{}, {1}, all_simple(rank)};
    if (rank == 1) subsets.pop_back();
    for (const auto& pp : subsets) {
      Rng rng(100 + static_cast<std::uint64_t>(configs));
      for (const auto& c : verify_mdybe(family(rank, pp), rng).checks) w.add(c);
      ++configs;
    }
  }
  return {w.pass, "max residual " + sci(w.value) + " <= " + sci(w.tolerance) + " over " + std::to_string(configs) +
                      " configurations x 100 cases (sl(2)-sl(4))"};
}

Outcome criterion2() {
  Worst w;
  for (const auto& pp : std::vector<std::vector<int>>{{}, {1}, {1, 2}}) {
    Rng rng(200);
    for (const auto& c : verify_algebroid(family(2, pp), rng).checks) w.add(c);
  }
  return {w.pass, "max residual (both components) " + sci(w.value) + " <= 1e-10, sl(3), 3 x 100 cases"};
}

Outcome criterion3() {
  const RFamily r = family(2, {1, 2});
  Rng rng(300);
  double quasi = 0.0, dr_zero = 0.0;
  for (int n = 0; n < 100; ++n) {
    const SpinCMState st = random_spin_cm_state(r, rng, n % 2 == 0);
    quasi = std::max(quasi, quasi_lax_residual(r, st).max_abs());
    const SpinCMState z = random_spin_cm_state(r, rng, true);
    dr_zero = std::max(dr_zero, dr_apply(r, z.q, cartan_part(z.xi), lax_L(r, z)).max_abs());
  }
  return {quasi <= 1e-8 && dr_zero == 0.0,
          "quasi-Lax residual " + sci(quasi) + " <= 1e-8 on 100 sl(3) states; dR term on J^-1(0) = " + sci(dr_zero)};
}

Outcome criterion4() {
  double dev = 0.0;
  bool complete = true;
  for (int rank = 1; rank <= 2; ++rank) {
    for (const auto& pp : std::vector<std::vector<int>>{all_simple(rank), {1}}) {
      if (rank == 1 && pp != all_simple(1)) continue;
      const RFamily r = family(rank, pp);
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(400 + seed);
        const SpinCMState st = random_spin_cm_state(r, rng, true);
        const UniformGrid g = make_grid(0.5, 1e-3);
        const auto run = exact_vs_rk4(solve_spin_cm(r, st, g), [&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); },
                                      st, g, 10);
        dev = std::max(dev, run.deviation);
        g_diagnostics = std::max(g_diagnostics, run.diagnostics);
        complete = complete && run.complete;
        ++g_exact_runs;
      }
    }
  }
  return {complete && dev <= 1e-6, "sup deviation from RK4 (dt 1e-4) " + sci(dev) +
                                       " <= 1e-6, t in [0, 0.5], sl(2)/sl(3), pi' = pi and {alpha_1}, 5 seeds"};
}

Outcome criterion5() {
  double dev = 0.0, simple = 0.0;
  bool complete = true;
  for (int rank = 1; rank <= 2; ++rank) {
    for (const auto& pp : std::vector<std::vector<int>>{all_simple(rank), {1}}) {
      if (rank == 1 && pp != all_simple(1)) continue;
      const RFamily r = family(rank, pp);
      const auto& alg = r.alg();
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(500 + seed);
        const ReducedState st = random_reduced_state(r, rng);
        const UniformGrid g = make_grid(0.5, 1e-3);
        const auto run = exact_vs_rk4(solve_reduced_cm(r, st, g),
                                      [&](const ReducedState& s) { return reduced_eom_rhs(r, s); }, st, g, 10);
        dev = std::max(dev, run.deviation);
        g_diagnostics = std::max(g_diagnostics, run.diagnostics);
        complete = complete && run.complete;
        ++g_exact_runs;
        for (const auto* path : {&run.exact, &run.rk4})
          for (const ReducedState& s : *path)
            for (int j = 0; j < alg.rank; ++j)
              simple = std::max(simple, std::abs(s.s.roots[static_cast<Eigen::Index>(alg.simple(j))] - 1.0));
      }
    }
  }
  return {complete && dev <= 1e-6 && simple <= 1e-9,
          "sup deviation " + sci(dev) + " <= 1e-6; max |s_alpha_j - 1| " + sci(simple) + " <= 1e-9"};
}

Outcome criterion6() {
  double dev = 0.0;
  bool complete = true;
  int configs = 0;
  const std::vector<std::vector<std::vector<int>>> subsets{
      {{1}, {}}, {{1, 2}, {}, {1}, {2}}, {{1, 2, 3}, {}, {1}, {2}, {1, 3}, {1, 2}, {2, 3}}};
  for (int rank = 1; rank <= 3; ++rank) {
    for (const auto& pp : subsets[static_cast<std::size_t>(rank - 1)]) {
      const RFamily r = family(rank, pp);
      for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        Rng rng(600 + 10 * static_cast<std::uint64_t>(configs) + seed);
        const TodaState st = random_toda_state(r, rng);
        const UniformGrid g = make_grid(1.0, 1e-2);
        const auto run =
            exact_vs_rk4(solve_toda(r, st, g), [&](const TodaState& s) { return toda_eom_rhs(r, s); }, st, g, 100);
        dev = std::max(dev, run.deviation);
        g_diagnostics = std::max(g_diagnostics, run.diagnostics);
        complete = complete && run.complete;
        ++g_exact_runs;
      }
      ++configs;
    }
  }
  // reduced Toda on sl(2) against the energy quadrature, y = alpha(x)
  const RFamily r = family(1, {1});
  const double s2 = std::sqrt(2.0);
  const dynlax::testing::LiouvilleOracle oracle{0.5, 2.0, 1.0};
  const Vec c = Vec::Ones(1);
  const auto sol = solve_toda_reduced(r, CartanPoint(Vec::Constant(1, 0.5 / s2)), CartanPoint(Vec::Constant(1, 2.0 / s2)),
                                      c, make_grid(1.0, 1e-2));
  double quad = 0.0;
  for (std::size_t k = 0; k < sol.trajectory.size(); ++k)
    quad = std::max(quad, std::abs(r.alg().alpha(0, sol.trajectory.states[k].x) - oracle.y_at(sol.trajectory.times[k])));
  for (const auto& [name, v] : sol.trajectory.diagnostics)
    for (double d : v) g_diagnostics = std::max(g_diagnostics, d);
  ++g_exact_runs;
  complete = complete && !sol.trajectory.truncated();
  return {complete && dev <= 1e-6 && quad <= 1e-6,
          "sup deviation " + sci(dev) + " <= 1e-6 over " + std::to_string(configs) +
              " (algebra, pi') pairs x 2 seeds, t in [0, 1]; reduced sl(2) vs quadrature " + sci(quad) + " <= 1e-6"};
}

double drift(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e = std::max(e, std::abs(x - v.front()));
  return e;
}

Outcome criterion7() {
  double dh = 0.0, dmom = 0.0, dspec = 0.0, dtr = 0.0;
  const auto trace_drift = [&](const std::vector<Mat>& ls) {
    const std::vector<double> t0 = trace_powers(ls.front());
    for (const Mat& l : ls) {
      const std::vector<double> t = trace_powers(l);
      for (std::size_t k = 0; k < t.size(); ++k) dtr = std::max(dtr, std::abs(t[k] - t0[k]));
    }
  };
  const auto spectrum_drift = [&](const std::vector<Mat>& ls) {
    const auto s0 = sorted_spectrum(ls.front());
    for (const Mat& l : ls) {
      const auto s = sorted_spectrum(l);
      for (std::size_t k = 0; k < s.size(); ++k) dspec = std::max(dspec, std::abs(s[k] - s0[k]));
    }
  };
  for (int rank = 1; rank <= 3; ++rank) {
    for (const auto& pp : std::vector<std::vector<int>>{all_simple(rank), {1}}) {
      const RFamily r = family(rank, pp);
      const auto& alg = r.alg();
      Rng rng(700 + static_cast<std::uint64_t>(rank));
      {
        IntegratorConfig<SpinCMState> cfg{1e-3, 1.0, spin_cm_monitors(r), 1e-8, false};
        const auto tr = integrate([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); },
                                  random_spin_cm_state(r, rng, true), cfg);
        dh = std::max(dh, drift(tr.monitors.at("H")));
        std::vector<Mat> ls;
        for (const auto& s : tr.states) {
          ls.push_back(to_matrix(alg, lax_L(r, s)));
          dmom = std::max(dmom, (s.xi.h - tr.states.front().xi.h).norm());
        }
        spectrum_drift(ls);
        trace_drift(ls);
      }
      {
        IntegratorConfig<SpinCMState> cfg{1e-3, 1.0, spin_cm_monitors(r), 1e-8, false};
        const auto tr = integrate([&](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); },
                                  random_spin_cm_state(r, rng, false), cfg);
        dh = std::max(dh, drift(tr.monitors.at("H")));
        for (const auto& s : tr.states) dmom = std::max(dmom, (s.xi.h - tr.states.front().xi.h).norm());
      }
      {
        IntegratorConfig<TodaState> cfg{1e-3, 1.0, toda_monitors(r), 1e-8, false};
        const auto tr =
            integrate([&](const TodaState& s) { return toda_eom_rhs(r, s); }, random_toda_state(r, rng), cfg);
        dh = std::max(dh, drift(tr.monitors.at("Hs")));
        std::vector<Mat> ls;
        for (const auto& s : tr.states) {
          ls.push_back(to_matrix(alg, toda_lax_pair(r, s).first));
          dmom = std::max(dmom, (s.eta.h - tr.states.front().eta.h).norm());
        }
        spectrum_drift(ls);
        trace_drift(ls);
      }
      {
        IntegratorConfig<ReducedState> cfg{1e-3, 1.0, reduced_cm_monitors(r), 1e-8, false};
        const auto tr = integrate([&](const ReducedState& s) { return reduced_eom_rhs(r, s); },
                                  random_reduced_state(r, rng), cfg);
        dh = std::max(dh, drift(tr.monitors.at("H0")));
      }
    }
  }
  return {dh <= 1e-8 && dmom <= 1e-9 && dspec <= 1e-7 && dtr <= 1e-8,
          "|dH| " + sci(dh) + " <= 1e-8, |d Pi_h| " + sci(dmom) + " <= 1e-9, spectrum " + sci(dspec) +
              " <= 1e-7, tr(L^k) " + sci(dtr) + " <= 1e-8 (sl(2)-sl(4), dt 1e-3, t in [0, 1])"};
}

Outcome criterion8() {
  double at_zero = 0.0, fd = 0.0, smallest = INFINITY;
  for (int rank = 2; rank <= 3; ++rank) {
    for (const auto& pp : std::vector<std::vector<int>>{all_simple(rank), {1}}) {
      Rng rng(800 + static_cast<std::uint64_t>(rank));
      const InvariantResiduals res = invariant_residuals(family(rank, pp), rng, 100);
      at_zero = std::max(at_zero, res.at_zero);
      fd = std::max(fd, res.fd_mismatch);
      smallest = std::min(smallest, res.smallest_generic);
    }
  }
  return {at_zero <= 1e-10 && fd <= 1e-6 && smallest > 1e-8,
          "at lambda = 0 " + sci(at_zero) + " <= 1e-10; generic lambda: min |bracket| " + sci(smallest) +
              " > 0, closed form vs finite differences " + sci(fd) + " <= 1e-6"};
}

Outcome criterion9() {
  bool pass = true;
  double worst_rate = 0.0, toda = 0.0;
  int monotone_failures = 0;
  for (int rank = 1; rank <= 3; ++rank) {
    for (const auto& pp : std::vector<std::vector<int>>{all_simple(rank), {1}, {}}) {
      Rng rng(900 + static_cast<std::uint64_t>(rank));
      const SuiteReport rep = verify_scaling(family(rank, pp), rng);
      pass = pass && rep.pass();
      for (const auto& c : rep.checks) {
        if (c.name == "non_monotone_series") monotone_failures += static_cast<int>(c.value);
        if (c.name.find("rate_relative_error") != std::string::npos) worst_rate = std::max(worst_rate, c.value);
        if (c.name == "toda_lax_residual") toda = std::max(toda, c.value);
      }
    }
  }
  return {pass, "tau in {3, 5, 7}: non-monotone series " + std::to_string(monotone_failures) +
                    ", worst |slope/predicted - 1| " + sci(worst_rate) + " <= 0.25; Toda Lax residual " + sci(toda) +
                    " <= 1e-8"};
}

Outcome criterion10() {
  return {g_exact_runs > 0 && g_diagnostics <= 1e-8,
          "max theta/factorization/reconstruction diagnostic " + sci(g_diagnostics) + " <= 1e-8 over " +
              std::to_string(g_exact_runs) + " exact runs of criteria 4-6"};
}

Outcome criterion11() {
  std::map<std::string, double> worst;
  bool pass = true;
  for (int rank = 1; rank <= 2; ++rank) {
    for (const auto& pp : std::vector<std::vector<int>>{all_simple(rank), {}}) {
      Rng rng(1100 + static_cast<std::uint64_t>(rank));
      const SuiteReport rep = verify_poisson(family(rank, pp), rng);
      pass = pass && rep.pass();
      for (const auto& c : rep.checks) {
        for (const char* kind : {"antisymmetry", "leibniz", "jacobi", "rho_poisson_map"})
          if (c.name.find(kind) != std::string::npos) worst[kind] = std::max(worst[kind], c.value);
      }
    }
  }
  return {pass, "antisymmetry " + sci(worst["antisymmetry"]) + ", Leibniz " + sci(worst["leibniz"]) +
                    " <= 1e-9; Jacobi " + sci(worst["jacobi"]) + " <= 1e-7; rho Poisson map " +
                    sci(worst["rho_poisson_map"]) + " <= 1e-8 (axioms 10 cases per bracket, map 100 cases, sl(2)/sl(3))"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"mDYBE residual", criterion1},
      {"algebroid identity", criterion2},
      {"quasi-Lax consistency", criterion3},
      {"exact vs RK4, spin CM", criterion4},
      {"exact vs RK4, reduced CM", criterion5},
      {"exact vs RK4, spin Toda", criterion6},
      {"conservation along RK4", criterion7},
      {"commuting invariants", criterion8},
      {"scaling limit", criterion9},
      {"theta and factorization residuals", criterion10},
      {"Poisson axioms", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2zu  %-34s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
