#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "dynlax/cli/config.hpp"

namespace dynlax::cli {

// Column names for pack(state), in the same order.
inline std::vector<std::string> state_columns(const RunConfig& cfg) {
  const auto& alg = *cfg.algebra;
  const std::string pos = detail::position_key(cfg.system);
  std::vector<std::string> cols;
  for (int i = 1; i <= alg.rank; ++i) cols.push_back(pos + "_" + std::to_string(i));
  for (int i = 1; i <= alg.rank; ++i) cols.push_back("p_" + std::to_string(i));
  if (cfg.system == System::ReducedToda) return cols;
  const std::string spin = cfg.system == System::SpinCM ? "xi" : cfg.system == System::ReducedCM ? "s" : "eta";
  for (int i = 1; i <= alg.rank; ++i) cols.push_back(spin + "_h_" + std::to_string(i));
  for (std::size_t a = 0; a < alg.num_roots(); ++a) cols.push_back(spin + "[" + root_key(alg, a) + "]");
  return cols;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct TrajectoryOutput {
  json config;
  Table table;
  std::optional<double> failure_time;
  std::string failure_reason;
  std::optional<double> error_estimate;
  bool accuracy_warning = false;
  std::map<std::string, double> diagnostics;  // sup over samples
};

template <class State>
TrajectoryOutput make_output(const RunConfig& cfg, const Trajectory<State>& tr, bool with_error_estimate) {
  TrajectoryOutput out;
  out.config = to_json(cfg);
  out.table.columns = {"t"};
  for (auto& c : state_columns(cfg)) out.table.columns.push_back(c);
  for (auto& m : tr.monitor_names) out.table.columns.push_back(m);
  std::vector<std::string> diag;
  for (const auto& [k, v] : tr.diagnostics) {
    double worst = 0.0;
    for (double d : v) worst = std::max(worst, d);
    out.diagnostics[k] = worst;
    if (v.size() == tr.size()) {
      diag.push_back(k);
      out.table.columns.push_back("diag_" + k);
    }
  }
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<double> row{tr.times[i]};
    const Vec z = pack(tr.states[i]);
    row.insert(row.end(), z.data(), z.data() + z.size());
    for (auto& m : tr.monitor_names) row.push_back(tr.monitors.at(m)[i]);
    for (auto& k : diag) row.push_back(tr.diagnostics.at(k)[i]);
    out.table.rows.push_back(std::move(row));
  }
  out.failure_time = tr.failure_time;
  out.failure_reason = tr.failure_reason;
  if (with_error_estimate) out.error_estimate = tr.error_estimate;
  out.accuracy_warning = tr.accuracy_warning;
  return out;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline void write_csv(std::ostream& os, const TrajectoryOutput& out) {
  os << "# " << out.config.dump() << "\n";
  for (std::size_t k = 0; k < out.table.columns.size(); ++k) os << (k ? "," : "") << csv_field(out.table.columns[k]);
  os << "\n";
  for (const auto& row : out.table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_number(row[k]);
    os << "\n";
  }
}

inline json trajectory_json(const TrajectoryOutput& out) {
  json j;
  j["config"] = out.config;
  j["columns"] = out.table.columns;
  j["data"] = out.table.rows;
  j["failure"] = out.failure_time ? json{{"time", *out.failure_time}, {"reason", out.failure_reason}} : json(nullptr);
  j["error_estimate"] = out.error_estimate ? json(*out.error_estimate) : json(nullptr);
  j["accuracy_warning"] = out.accuracy_warning;
  j["diagnostics"] = out.diagnostics;
  return j;
}

inline void write_trajectory(std::ostream& os, const TrajectoryOutput& out, Format f) {
  if (f == Format::Csv)
    write_csv(os, out);
  else
    os << trajectory_json(out).dump(2) << "\n";
}

}  // namespace dynlax::cli
