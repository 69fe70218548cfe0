#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridwalk/chain_analysis.hpp"
#include "gridwalk/engine.hpp"
#include "gridwalk/ensemble.hpp"
#include "gridwalk/version.hpp"

namespace gridwalk {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of a double; locale-independent, so
/// repeated runs emit byte-identical text.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// ---- episode results ----

inline json episode_result_json(const EpisodeResult& result) {
  json j;
  j["consensus_reached"] = result.consensus_reached;
  if (result.consensus_reached) {
    j["consensus_time_steps"] = result.consensus_steps;
    j["consensus_time_s"] = result.consensus_seconds;
  } else {
    j["consensus_time_steps"] = nullptr;
    j["consensus_time_s"] = nullptr;
  }
  std::vector<double> xi(static_cast<std::size_t>(result.final_xi.size()));
  for (Eigen::Index a = 0; a < result.final_xi.size(); ++a)
    xi[static_cast<std::size_t>(a)] = result.final_xi(a);
  j["final_xi"] = xi;
  j["detection_events"] = result.detection_events;
  j["union_edge_count"] = result.union_edge_count;
  j["union_complete"] = result.union_complete;
  j["seed"] = result.seed;
  return j;
}

/// History CSV: one row per agent per recorded step.
inline void write_history_csv(std::ostream& out, const EpisodeResult& result) {
  out << "step,agent_id,node,xi,gate\n";
  for (const auto& rec : result.history) {
    for (std::size_t a = 0; a < rec.nodes.size(); ++a) {
      out << rec.step << ',' << (a + 1) << ',' << rec.nodes[a] << ','
          << format_double(rec.xi(static_cast<Eigen::Index>(a))) << ','
          << static_cast<int>(rec.gates[a]) << '\n';
    }
  }
}

// ---- episode / sweep configuration ----

inline json episode_config_json(const EpisodeConfig& cfg) {
  json j;
  j["grid_dim"] = cfg.grid_dim;
  j["spacing"] = cfg.spacing;
  j["agents"] = cfg.agents;
  j["alpha"] = cfg.alpha;
  j["epsilon"] = cfg.epsilon;
  j["feature_nodes"] = cfg.feature_nodes;
  j["xi_ref"] = cfg.xi_ref;
  j["noise"] = cfg.noise;
  j["noise_is_stddev"] = cfg.noise_is_stddev;
  j["per_agent_noise"] = cfg.per_agent_noise;
  j["comm_radius"] = cfg.comm_radius;
  j["seed"] = cfg.seed;
  j["max_steps"] = cfg.max_steps;
  j["step_seconds"] = cfg.step_seconds;
  return j;
}

namespace detail {

[[noreturn]] inline void config_error(const std::string& field,
                                      const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

template <typename T>
void read_field(const json& j, const std::string& field, T& out) {
  if (!j.contains(field)) return;
  try {
    out = j.at(field).get<T>();
  } catch (const json::exception&) {
    config_error(field, "has the wrong type");
  }
}

inline void reject_unknown_fields(const json& j,
                                  const std::vector<std::string>& known,
                                  const std::string& scope) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : known)
      if (it.key() == k) ok = true;
    if (!ok)
      config_error(scope.empty() ? it.key() : scope + "." + it.key(),
                   "is not a recognized field");
  }
}

}  // namespace detail

/// Episode template fields accepted inside a sweep config. Per-scenario
/// fields (grid_dim, agents, seed) are controlled by the sweep itself and
/// are rejected here.
inline EpisodeConfig episode_template_from_json(const json& j) {
  if (!j.is_object())
    detail::config_error("episode", "must be a JSON object");
  detail::reject_unknown_fields(
      j,
      {"spacing", "alpha", "epsilon", "feature_nodes", "xi_ref", "noise",
       "noise_is_stddev", "per_agent_noise", "comm_radius", "max_steps",
       "step_seconds"},
      "episode");
  EpisodeConfig cfg;
  detail::read_field(j, "spacing", cfg.spacing);
  detail::read_field(j, "alpha", cfg.alpha);
  detail::read_field(j, "epsilon", cfg.epsilon);
  detail::read_field(j, "feature_nodes", cfg.feature_nodes);
  detail::read_field(j, "xi_ref", cfg.xi_ref);
  detail::read_field(j, "noise", cfg.noise);
  detail::read_field(j, "noise_is_stddev", cfg.noise_is_stddev);
  detail::read_field(j, "per_agent_noise", cfg.per_agent_noise);
  detail::read_field(j, "comm_radius", cfg.comm_radius);
  detail::read_field(j, "max_steps", cfg.max_steps);
  detail::read_field(j, "step_seconds", cfg.step_seconds);
  return cfg;
}

inline ScenarioSweep sweep_from_json(const json& j) {
  if (!j.is_object())
    throw std::invalid_argument("sweep config must be a JSON object");
  detail::reject_unknown_fields(
      j, {"agent_counts", "grid_dims", "runs", "base_seed", "episode"}, "");
  ScenarioSweep sweep;
  detail::read_field(j, "agent_counts", sweep.agent_counts);
  detail::read_field(j, "grid_dims", sweep.grid_dims);
  detail::read_field(j, "runs", sweep.runs);
  detail::read_field(j, "base_seed", sweep.base_seed);
  if (j.contains("episode"))
    sweep.episode = episode_template_from_json(j.at("episode"));
  sweep.validate();
  return sweep;
}

inline json sweep_to_json(const ScenarioSweep& sweep) {
  json j;
  j["agent_counts"] = sweep.agent_counts;
  j["grid_dims"] = sweep.grid_dims;
  j["runs"] = sweep.runs;
  j["base_seed"] = sweep.base_seed;
  json episode = episode_config_json(sweep.episode);
  for (const char* owned : {"grid_dim", "agents", "seed"}) episode.erase(owned);
  j["episode"] = episode;
  return j;
}

// ---- ensemble statistics ----

inline constexpr const char* kStatsCsvHeader =
    "N,c,density,runs,mean_tc_s,std_tc_s,min_tc_s,median_tc_s,max_tc_s,"
    "unconverged";

inline std::string stats_csv(const std::vector<EnsembleRow>& rows) {
  std::ostringstream out;
  out << kStatsCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.agents << ',' << row.grid_dim << ','
        << format_double(row.density) << ',' << row.runs << ','
        << format_double(row.tc_seconds.mean) << ','
        << format_double(row.tc_seconds.stddev) << ','
        << format_double(row.tc_seconds.min) << ','
        << format_double(row.tc_seconds.median) << ','
        << format_double(row.tc_seconds.max) << ',' << row.unconverged
        << '\n';
  }
  return out.str();
}

inline std::vector<EnsembleRow> parse_stats_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kStatsCsvHeader)
    throw std::invalid_argument("stats CSV header does not match schema");
  std::vector<EnsembleRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, ',')) cols.push_back(field);
    if (cols.size() != 10)
      throw std::invalid_argument("stats CSV row has wrong column count");
    EnsembleRow row;
    row.agents = std::stoi(cols[0]);
    row.grid_dim = std::stoi(cols[1]);
    row.density = std::stod(cols[2]);
    row.runs = std::stoi(cols[3]);
    row.tc_seconds.mean = std::stod(cols[4]);
    row.tc_seconds.stddev = std::stod(cols[5]);
    row.tc_seconds.min = std::stod(cols[6]);
    row.tc_seconds.median = std::stod(cols[7]);
    row.tc_seconds.max = std::stod(cols[8]);
    row.unconverged = std::stoi(cols[9]);
    row.tc_seconds.count = row.runs - row.unconverged;
    rows.push_back(row);
  }
  return rows;
}

// ---- exponential fit ----

inline json fit_json(const ExpFit& fit) {
  json j;
  j["a"] = fit.a;
  j["b"] = fit.b;
  j["r2"] = fit.r2;
  j["model"] = "mu = a*exp(b*density)";
  return j;
}

// ---- run manifest ----

inline json manifest_json(const json& resolved_config,
                          const std::vector<std::string>& outputs,
                          const std::string& timestamp) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["timestamp"] = timestamp;
  j["config"] = resolved_config;
  j["outputs"] = outputs;
  return j;
}

// ---- verification report ----

inline json verify_report_json(const VerifyReport& r) {
  json j;
  j["grid_dim"] = r.grid_dim;
  j["agents"] = r.agents;
  j["states"] = r.states;
  j["p_row_sum_error"] = r.p_row_sum_error;
  j["p_row_stochastic"] = r.p_row_stochastic;
  j["p_irreducible"] = r.p_irreducible;
  j["stationary_residual"] = r.stationary_residual;
  j["stationary_vs_degree_form"] = r.stationary_vs_degree_form;
  j["stationary_matches"] = r.stationary_matches;
  j["composite_built"] = r.composite_built;
  if (r.composite_built) {
    j["composite_states"] = r.composite_states;
    j["q_row_sum_error"] = r.q_row_sum_error;
    j["q_row_stochastic"] = r.q_row_stochastic;
    j["q_irreducible"] = r.q_irreducible;
  } else {
    j["composite_skipped"] =
        "state count exceeds cap of " + std::to_string(r.composite_cap);
  }
  j["union_complete"] = r.union_complete;
  j["union_steps"] = r.union_steps;
  j["feature_rooted"] = r.feature_rooted;
  j["pass"] = r.pass;
  return j;
}

inline std::string verify_report_text(const VerifyReport& r) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream out;
  out << "chain verification: c=" << r.grid_dim << " (S=" << r.states
      << "), N=" << r.agents << '\n';
  out << "  P row-stochastic:      " << yn(r.p_row_stochastic)
      << " (max row-sum error " << format_double(r.p_row_sum_error) << ")\n";
  out << "  P irreducible:         " << yn(r.p_irreducible) << '\n';
  out << "  stationary residual:   " << format_double(r.stationary_residual)
      << '\n';
  out << "  pi matches (d_i+1)/D:  " << yn(r.stationary_matches)
      << " (max error " << format_double(r.stationary_vs_degree_form)
      << ")\n";
  if (r.composite_built) {
    out << "  Q states:              " << r.composite_states << '\n';
    out << "  Q row-stochastic:      " << yn(r.q_row_stochastic)
        << " (max row-sum error " << format_double(r.q_row_sum_error)
        << ")\n";
    out << "  Q irreducible:         " << yn(r.q_irreducible) << '\n';
  } else {
    out << "  Q checks:              skipped (S^N exceeds cap of "
        << r.composite_cap << " states)\n";
  }
  out << "  comm union complete:   " << yn(r.union_complete);
  if (r.union_complete) out << " (after " << r.union_steps << " steps)";
  out << '\n';
  out << "  feature-rooted union:  " << yn(r.feature_rooted) << '\n';
  out << "  overall:               " << (r.pass ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace gridwalk
