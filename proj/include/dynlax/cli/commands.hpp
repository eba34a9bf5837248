#pragma once

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include "dynlax/cli/config.hpp"
#include "dynlax/cli/io.hpp"
#include "dynlax/verify.hpp"

namespace dynlax::cli {

enum ExitCode { kPass = 0, kValidation = 1, kNumerical = 2, kVerificationFailed = 3 };

enum class Command { Simulate, SolveExact, Compare, Verify };

inline Command parse_command(const std::string& s) {
  if (s == "simulate") return Command::Simulate;
  if (s == "solve-exact") return Command::SolveExact;
  if (s == "compare") return Command::Compare;
  if (s == "verify") return Command::Verify;
  throw ValidationError("unknown subcommand '" + s + "'");
}

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::string> suite;
};

template <class State>
struct SystemDriver {
  State initial;
  std::function<State(const State&)> rhs;
  std::vector<Monitor<State>> monitors;
  std::function<ExactSolution<State>(const UniformGrid&)> exact;
};

// Calls fn(driver) with the driver of the configured system.
template <class Fn>
auto with_system(const RunConfig& cfg, Fn&& fn) {
  const RFamily r = cfg.family();
  const InitialState& in = cfg.initial;
  switch (cfg.system) {
    case System::SpinCM: {
      SystemDriver<SpinCMState> d{{in.q, in.p, in.spin},
                                  [r](const SpinCMState& s) { return spin_cm_eom_rhs(r, s); },
                                  spin_cm_monitors(r),
                                  {}};
      d.exact = [r, st = d.initial](const UniformGrid& g) { return solve_spin_cm(r, st, g); };
      return fn(d);
    }
    case System::ReducedCM: {
      SystemDriver<ReducedState> d{{in.q, in.p, in.spin},
                                   [r](const ReducedState& s) { return reduced_eom_rhs(r, s); },
                                   reduced_cm_monitors(r),
                                   {}};
      d.exact = [r, st = d.initial](const UniformGrid& g) { return solve_reduced_cm(r, st, g); };
      return fn(d);
    }
    case System::SpinToda: {
      SystemDriver<TodaState> d{{in.q, in.p, in.spin},
                                [r](const TodaState& s) { return toda_eom_rhs(r, s); },
                                toda_monitors(r),
                                {}};
      d.exact = [r, st = d.initial](const UniformGrid& g) { return solve_toda(r, st, g); };
      return fn(d);
    }
    case System::ReducedToda:
    default: {
      const Vec c = in.c;
      SystemDriver<CanonicalState> d{{in.q, in.p},
                                     [r, c](const CanonicalState& s) { return reduced_toda_rhs(r, s, c); },
                                     reduced_toda_monitors(r, c),
                                     {}};
      d.exact = [r, c, st = d.initial](const UniformGrid& g) { return solve_toda_reduced(r, st.x, st.p, c, g); };
      return fn(d);
    }
  }
}

struct CommandResult {
  int exit_code = kPass;
  std::string message;  // one-line summary for stderr
};

inline CommandResult finish_trajectory(const TrajectoryOutput& out, Format f, std::ostream& os) {
  write_trajectory(os, out, f);
  CommandResult res;
  if (out.failure_time) {
    res.exit_code = kNumerical;
    res.message = "trajectory truncated at t = " + format_number(*out.failure_time) + ": " + out.failure_reason;
  } else if (out.accuracy_warning) {
    res.message = "accuracy warning: step-halving error estimate " + format_number(*out.error_estimate) +
                  " exceeds tolerance";
  }
  return res;
}

inline CommandResult cmd_simulate(const RunConfig& cfg, std::ostream& os) {
  return with_system(cfg, [&](auto& d) {
    using State = std::decay_t<decltype(d.initial)>;
    IntegratorConfig<State> ic{cfg.dt, cfg.t_max, d.monitors, cfg.tolerance.value_or(1e-8), true};
    const Trajectory<State> tr = integrate(d.rhs, d.initial, ic);
    return finish_trajectory(make_output(cfg, tr, true), cfg.format, os);
  });
}

inline CommandResult cmd_solve_exact(const RunConfig& cfg, std::ostream& os) {
  return with_system(cfg, [&](auto& d) {
    auto sol = d.exact(make_grid(cfg.t_max, cfg.dt));
    attach_monitors(sol.trajectory, d.monitors);
    return finish_trajectory(make_output(cfg, sol.trajectory, false), cfg.format, os);
  });
}

struct CompareReport {
  json report;
  bool pass = false;
  bool truncated = false;
};

// Exact solution on its grid against RK4 with an integer number of substeps per grid interval.
inline CompareReport compare(const RunConfig& cfg, double tolerance) {
  return with_system(cfg, [&](auto& d) {
    using State = std::decay_t<decltype(d.initial)>;
    const UniformGrid grid = make_grid(cfg.t_max, cfg.dt);
    const ExactSolution<State> sol = d.exact(grid);
    const double h = grid.step();
    const std::size_t sub = grid.intervals ? std::max<std::size_t>(1, dynlax::detail::step_count(h, cfg.rk4_dt)) : 1;
    IntegratorConfig<State> ic{grid.intervals ? h / static_cast<double>(sub) : cfg.rk4_dt, grid.t_max, {}, 1e-8,
                               true};
    const Trajectory<State> rk = integrate(d.rhs, d.initial, ic);

    const std::size_t n_exact = sol.trajectory.size();
    const std::size_t n_rk = rk.size() == 0 ? 0 : (rk.size() - 1) / sub + 1;
    const std::size_t n = std::min(n_exact, n_rk);
    const std::vector<std::string> cols = state_columns(cfg);
    std::vector<double> dev(cols.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const Vec e = pack(sol.trajectory.states[k]) - pack(rk.states[k * sub]);
      for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double v = std::abs(e[i]);
        dev[static_cast<std::size_t>(i)] = std::isnan(v) ? INFINITY : std::max(dev[static_cast<std::size_t>(i)], v);
      }
    }
    CompareReport out;
    double worst = 0.0;
    json per = json::object();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      per[cols[i]] = dev[i];
      worst = std::max(worst, dev[i]);
    }
    const bool exact_short = n_exact < grid.intervals + 1, rk_short = n_rk < grid.intervals + 1;
    out.truncated = exact_short || rk_short;
    out.pass = n > 0 && worst <= tolerance;
    json diag = json::object();
    for (const auto& [k, v] : sol.trajectory.diagnostics) {
      double m = 0.0;
      for (double x : v) m = std::max(m, x);
      diag[k] = m;
    }
    json& r = out.report;
    r["config"] = to_json(cfg);
    r["grid"] = {{"t_max", grid.t_max}, {"intervals", grid.intervals}, {"step", h}, {"rk4_substeps", sub}};
    r["samples_compared"] = n;
    r["common_t_max"] = n ? sol.trajectory.times[n - 1] : 0.0;
    r["deviation"] = per;
    r["max_deviation"] = worst;
    r["tolerance"] = tolerance;
    r["rk4_error_estimate"] = rk.error_estimate;
    r["exact_diagnostics"] = diag;
    r["pass"] = out.pass;
    r["warnings"] = json::array();
    if (out.truncated) {
      std::string w = "truncated comparison: common domain [0, " + format_number(r["common_t_max"].get<double>()) + "]";
      if (exact_short) w += "; exact solver stopped: " + sol.trajectory.failure_reason;
      if (rk_short) w += "; rk4 stopped: " + rk.failure_reason;
      r["warnings"].push_back(w);
    }
    return out;
  });
}

inline CommandResult cmd_compare(const RunConfig& cfg, std::ostream& os) {
  const CompareReport c = compare(cfg, cfg.tolerance.value_or(1e-6));
  os << c.report.dump(2) << "\n";
  CommandResult res;
  res.message = "compare: max deviation " + format_number(c.report["max_deviation"].get<double>());
  if (c.truncated) res.message += " (" + c.report["warnings"][0].get<std::string>() + ")";
  res.exit_code = c.pass ? kPass : kVerificationFailed;
  return res;
}

inline json suite_json(const SuiteReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  return {{"suite", rep.suite}, {"checks", checks}, {"series", rep.series}, {"pass", rep.pass()}};
}

inline CommandResult cmd_verify(const RunConfig& cfg, std::ostream& os) {
  const auto& names = verify_suites();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
    throw ValidationError("verify: unknown suite '" + cfg.suite + "'");
  Rng rng(cfg.seed);
  VerifyOptions o;
  o.cases = cfg.cases;
  if (cfg.tolerance) o.tolerance = *cfg.tolerance;
  const SuiteReport rep = run_suite(cfg.suite, cfg.family(), rng, o);
  json j = suite_json(rep);
  j["config"] = to_json(cfg);
  os << j.dump(2) << "\n";
  CommandResult res;
  res.exit_code = rep.pass() ? kPass : kVerificationFailed;
  res.message = "verify " + cfg.suite + ": " + (rep.pass() ? "pass" : "FAIL");
  return res;
}

inline RunConfig resolve(Command cmd, json j, const Overrides& ov) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  if (ov.seed) j["seed"] = *ov.seed;
  if (ov.tolerance) j["tolerance"] = *ov.tolerance;
  if (ov.output) j["output"]["path"] = *ov.output;
  if (ov.format) j["output"]["format"] = *ov.format;
  if (ov.suite) j["verify"]["suite"] = *ov.suite;
  RunConfig cfg = parse_config(j);
  if (cmd == Command::Verify) {
    if (cfg.suite.empty()) throw ValidationError("verify: no suite given");
  } else {
    if (!cfg.has_system) throw ValidationError("system: missing");
    const Method want = cmd == Command::Simulate ? Method::Rk4 : cmd == Command::SolveExact ? Method::Exact : Method::Both;
    if (cfg.method_explicit && cfg.method != want)
      throw ValidationError("method: '" + method_name(cfg.method) + "' does not fit this subcommand");
    cfg.method = want;
  }
  validate(cfg);
  return cfg;
}

// Runs one subcommand end to end; errors are mapped to exit codes and reported on err.
inline int run(Command cmd, const json& config, const Overrides& ov, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = resolve(cmd, config, ov);
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kValidation;
  }
  std::ofstream file;
  std::ostream* os = &out;
  if (cfg.output_path) {
    file.open(*cfg.output_path);
    if (!file) {
      err << "cannot open " << *cfg.output_path << " for writing\n";
      return kValidation;
    }
    os = &file;
  }
  try {
    CommandResult res;
    switch (cmd) {
      case Command::Simulate: res = cmd_simulate(cfg, *os); break;
      case Command::SolveExact: res = cmd_solve_exact(cfg, *os); break;
      case Command::Compare: res = cmd_compare(cfg, *os); break;
      case Command::Verify: res = cmd_verify(cfg, *os); break;
    }
    if (!res.message.empty()) err << res.message << "\n";
    return res.exit_code;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace dynlax::cli
