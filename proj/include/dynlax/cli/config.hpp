#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynlax/factor.hpp"
#include "dynlax/sampling.hpp"

namespace dynlax::cli {

using json = nlohmann::json;

enum class System { SpinCM, ReducedCM, SpinToda, ReducedToda };
enum class Method { Rk4, Exact, Both };
enum class Format { Csv, Json };

inline System parse_system(const std::string& s) {
  if (s == "spin-cm") return System::SpinCM;
  if (s == "reduced-cm") return System::ReducedCM;
  if (s == "spin-toda" || s == "toda") return System::SpinToda;
  if (s == "reduced-toda") return System::ReducedToda;
  throw ValidationError("system: unknown system '" + s + "'");
}

inline std::string system_name(System s) {
  static const char* names[] = {"spin-cm", "reduced-cm", "spin-toda", "reduced-toda"};
  return names[static_cast<int>(s)];
}

inline Method parse_method(const std::string& s) {
  if (s == "rk4") return Method::Rk4;
  if (s == "exact") return Method::Exact;
  if (s == "both") return Method::Both;
  throw ValidationError("method: expected rk4, exact or both, got '" + s + "'");
}

inline std::string method_name(Method m) {
  static const char* names[] = {"rk4", "exact", "both"};
  return names[static_cast<int>(m)];
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ValidationError("output.format: expected csv or json, got '" + s + "'");
}

inline std::string format_name(Format f) { return f == Format::Csv ? "csv" : "json"; }

// Initial data for every system; only the fields of the configured system are used.
struct InitialState {
  CartanPoint q;  // q for the Calogero-Moser systems, x for Toda
  CartanPoint p;
  GElement spin;  // xi, s or eta
  Vec c;          // reduced Toda constants, one per simple root
};

struct RunConfig {
  AlgebraPtr algebra;
  std::vector<int> pi_prime;
  System system = System::SpinCM;
  InitialState initial;
  bool random_initial = false;
  double t_max = 1.0;
  double dt = 1e-3;
  double rk4_dt = 1e-4;
  Method method = Method::Rk4;
  bool method_explicit = false;
  bool has_system = false;
  std::optional<std::string> output_path;
  Format format = Format::Csv;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::string suite;
  int cases = 100;

  RFamily family() const { return make_rfamily(algebra, pi_prime); }
};

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + key + ": missing");
  return j.at(key);
}

inline double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field + ": expected a number");
  return j.get<double>();
}

inline Vec number_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected a list of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], field);
  return v;
}

// Rank-length orthonormal coordinates, or the rep_dim diagonal entries of a traceless matrix.
inline CartanPoint cartan_vector(const LieAlgebraData& alg, const json& j, const std::string& field) {
  const Vec v = number_list(j, field);
  if (v.size() == alg.rank) return CartanPoint(v);
  if (v.size() == alg.rep_dim) {
    if (std::abs(v.sum()) > 1e-12 * (1.0 + v.cwiseAbs().sum()))
      throw ValidationError(field + ": diagonal entries must sum to zero");
    return cartan_part(from_matrix(alg, Mat(v.asDiagonal())));
  }
  throw ValidationError(field + ": expected " + std::to_string(alg.rank) + " or " + std::to_string(alg.rep_dim) +
                        " numbers, got " + std::to_string(v.size()));
}

inline std::vector<int> parse_key(const std::string& key, const std::string& field) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    const std::size_t end = std::min(key.find(',', pos), key.size());
    const std::string tok = key.substr(pos, end - pos);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ValidationError(field + ": malformed root key '" + key + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

inline GElement spin_element(const LieAlgebraData& alg, const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field + ": expected an object keyed by root coordinates");
  GElement x = zero_element(alg);
  for (const auto& [key, val] : j.items()) {
    if (key == "h") {
      x.h = cartan_vector(alg, val, field + ".h").coeffs;
      continue;
    }
    const std::vector<int> coords = parse_key(key, field);
    if (static_cast<int>(coords.size()) != alg.rank)
      throw ValidationError(field + ": root key '" + key + "' needs " + std::to_string(alg.rank) + " coordinates");
    auto it = alg.index_by_coords.find(coords);
    if (it == alg.index_by_coords.end()) throw ValidationError(field + ": '" + key + "' is not a root");
    x.roots[static_cast<Eigen::Index>(it->second)] = number(val, field + "." + key);
  }
  return x;
}

inline json cartan_json(const CartanPoint& q) {
  return json(std::vector<double>(q.coeffs.data(), q.coeffs.data() + q.size()));
}

inline json spin_json(const LieAlgebraData& alg, const GElement& x) {
  json j = json::object();
  j["h"] = json(std::vector<double>(x.h.data(), x.h.data() + x.h.size()));
  for (std::size_t a = 0; a < alg.num_roots(); ++a) j[root_key(alg, a)] = x.roots[static_cast<Eigen::Index>(a)];
  return j;
}

inline const char* position_key(System s) {
  return (s == System::SpinToda || s == System::ReducedToda) ? "x" : "q";
}

inline void sample_initial(RunConfig& cfg) {
  const RFamily r = cfg.family();
  const auto& alg = r.alg();
  Rng rng(cfg.seed);
  InitialState& in = cfg.initial;
  switch (cfg.system) {
    case System::SpinCM: {
      const SpinCMState st = random_spin_cm_state(r, rng, true);
      in.q = st.q, in.p = st.p, in.spin = st.xi;
      break;
    }
    case System::ReducedCM: {
      const ReducedState st = random_reduced_state(r, rng);
      in.q = st.q, in.p = st.p, in.spin = st.s;
      break;
    }
    case System::SpinToda: {
      const TodaState st = random_toda_state(r, rng);
      in.q = st.x, in.p = st.p, in.spin = st.eta;
      break;
    }
    case System::ReducedToda:
      in.q = random_cartan(alg, rng, 0.5);
      in.p = random_cartan(alg, rng, 0.5);
      in.c = -rng.uniform_vec(alg.rank, 0.5, 1.5);
      break;
  }
}

}  // namespace detail

// Structural and domain checks that do not depend on the subcommand.
inline void validate(const RunConfig& cfg) {
  const RFamily r = cfg.family();
  const auto& alg = r.alg();
  const InitialState& in = cfg.initial;
  const std::string pos = std::string("initial.") + detail::position_key(cfg.system);
  if (!(cfg.t_max >= 0)) throw ValidationError("time.t_max: must be non-negative");
  if (!(cfg.dt > 0)) throw ValidationError("time.dt: must be positive");
  if (!(cfg.rk4_dt > 0)) throw ValidationError("time.rk4_dt: must be positive");
  if (cfg.tolerance && !(*cfg.tolerance > 0)) throw ValidationError("tolerance: must be positive");
  if (cfg.cases < 1) throw ValidationError("verify.cases: must be positive");
  if (cfg.has_system) {
    if (!in.q.coeffs.allFinite() || !in.p.coeffs.allFinite()) throw ValidationError(pos + ": non-finite value");
    if (cfg.system == System::ReducedToda) return;
    if (cfg.system == System::SpinCM || cfg.system == System::ReducedCM) {
      try {
        check_domain(r, in.q);
      } catch (const DomainViolation& e) {
        throw ValidationError(pos + ": outside the domain (" + std::string(e.what()) + ")");
      }
    }
    if (cfg.system == System::ReducedCM) {
      if (in.spin.h.cwiseAbs().maxCoeff() > 0) throw ValidationError("initial.spin.h: must vanish for reduced-cm");
      for (int j = 0; j < alg.rank; ++j)
        if (in.spin.roots[static_cast<Eigen::Index>(alg.simple(j))] != 1.0)
          throw ValidationError("initial.spin." + root_key(alg, alg.simple(j)) +
                                ": simple-root coefficients are fixed to 1 for reduced-cm");
    }
    if (cfg.system == System::SpinCM && cfg.method != Method::Rk4 &&
        in.spin.h.cwiseAbs().maxCoeff() > 1e-10 * (1.0 + in.spin.max_abs()))
      throw ValidationError("initial.spin.h: the exact spin-cm solver needs a vanishing Cartan part");
  }
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  RunConfig cfg;

  const json& a = detail::require(j, "algebra", "");
  const std::string series = detail::require(a, "series", "algebra.").get<std::string>();
  const json& rank = detail::require(a, "rank", "algebra.");
  if (!rank.is_number_integer()) throw ValidationError("algebra.rank: expected an integer");
  try {
    cfg.algebra = build_algebra(parse_series(series), rank.get<int>());
  } catch (const Error& e) {
    throw ValidationError(std::string("algebra: ") + e.what());
  }
  const int r = cfg.algebra->rank;

  if (j.contains("pi_prime")) {
    if (!j["pi_prime"].is_array()) throw ValidationError("pi_prime: expected a list of simple-root indices");
    for (const auto& v : j["pi_prime"]) {
      if (!v.is_number_integer()) throw ValidationError("pi_prime: expected integers");
      const int k = v.get<int>();
      if (k < 1 || k > r) throw ValidationError("pi_prime: index " + std::to_string(k) + " outside 1.." + std::to_string(r));
      cfg.pi_prime.push_back(k);
    }
    std::sort(cfg.pi_prime.begin(), cfg.pi_prime.end());
    cfg.pi_prime.erase(std::unique(cfg.pi_prime.begin(), cfg.pi_prime.end()), cfg.pi_prime.end());
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError("seed: expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerance")) cfg.tolerance = detail::number(j["tolerance"], "tolerance");
  if (j.contains("method")) {
    cfg.method = parse_method(j["method"].get<std::string>());
    cfg.method_explicit = true;
  }
  if (j.contains("time")) {
    const json& t = j["time"];
    if (t.contains("t_max")) cfg.t_max = detail::number(t["t_max"], "time.t_max");
    if (t.contains("dt")) cfg.dt = detail::number(t["dt"], "time.dt");
    if (t.contains("rk4_dt")) cfg.rk4_dt = detail::number(t["rk4_dt"], "time.rk4_dt");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
    if (o.contains("format")) cfg.format = parse_format(o["format"].get<std::string>());
  }
  if (j.contains("verify")) {
    const json& v = j["verify"];
    if (v.contains("suite")) cfg.suite = v["suite"].get<std::string>();
    if (v.contains("cases")) {
      if (!v["cases"].is_number_integer()) throw ValidationError("verify.cases: expected an integer");
      cfg.cases = v["cases"].get<int>();
    }
  }

  // verify configs may omit the system and initial state entirely
  if (!j.contains("system")) {
    if (j.contains("initial")) throw ValidationError("system: missing");
    return cfg;
  }
  cfg.has_system = true;
  cfg.system = parse_system(j["system"].get<std::string>());

  const auto& alg = *cfg.algebra;
  const json& init = detail::require(j, "initial", "");
  if (init.is_string()) {
    if (init.get<std::string>() != "random") throw ValidationError("initial: expected an object or \"random\"");
    cfg.random_initial = true;
    detail::sample_initial(cfg);
    return cfg;
  }
  if (!init.is_object()) throw ValidationError("initial: expected an object or \"random\"");
  const char* pk = detail::position_key(cfg.system);
  InitialState& in = cfg.initial;
  in.q = detail::cartan_vector(alg, detail::require(init, pk, "initial."), std::string("initial.") + pk);
  in.p = init.contains("p") ? detail::cartan_vector(alg, init["p"], "initial.p") : CartanPoint::zero(r);
  if (cfg.system == System::ReducedToda) {
    in.c = detail::number_list(detail::require(init, "c", "initial."), "initial.c");
    if (in.c.size() != r) throw ValidationError("initial.c: expected " + std::to_string(r) + " constants");
    if (init.contains("spin")) throw ValidationError("initial.spin: not used by reduced-toda; give c instead");
    return cfg;
  }
  in.spin = init.contains("spin") ? detail::spin_element(alg, init["spin"], "initial.spin") : zero_element(alg);
  if (cfg.system == System::ReducedCM) {
    const json spin = init.value("spin", json::object());
    for (int k = 0; k < r; ++k) {
      const std::size_t a = alg.simple(k);
      if (!spin.contains(root_key(alg, a))) in.spin.roots[static_cast<Eigen::Index>(a)] = 1.0;
    }
  }
  return cfg;
}

// Fully resolved config: every default filled in, random initial data replaced by its sample.
inline json to_json(const RunConfig& cfg) {
  const auto& alg = *cfg.algebra;
  json j;
  j["algebra"] = {{"series", series_name(alg.series)}, {"rank", alg.rank}};
  j["pi_prime"] = cfg.pi_prime;
  j["seed"] = cfg.seed;
  if (cfg.tolerance) j["tolerance"] = *cfg.tolerance;
  if (!cfg.suite.empty()) j["verify"] = {{"suite", cfg.suite}, {"cases", cfg.cases}};
  if (!cfg.has_system) return j;
  j["system"] = system_name(cfg.system);
  j["method"] = method_name(cfg.method);
  j["time"] = {{"t_max", cfg.t_max}, {"dt", cfg.dt}, {"rk4_dt", cfg.rk4_dt}};
  json in;
  in[detail::position_key(cfg.system)] = detail::cartan_json(cfg.initial.q);
  in["p"] = detail::cartan_json(cfg.initial.p);
  if (cfg.system == System::ReducedToda)
    in["c"] = json(std::vector<double>(cfg.initial.c.data(), cfg.initial.c.data() + cfg.initial.c.size()));
  else
    in["spin"] = detail::spin_json(alg, cfg.initial.spin);
  j["initial"] = in;
  j["output"] = {{"format", format_name(cfg.format)}};
  if (cfg.output_path) j["output"]["path"] = *cfg.output_path;
  return j;
}

}  // namespace dynlax::cli
