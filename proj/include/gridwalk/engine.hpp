#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridwalk/consensus.hpp"
#include "gridwalk/grid.hpp"
#include "gridwalk/mobility.hpp"
#include "gridwalk/network.hpp"
#include "gridwalk/random.hpp"

namespace gridwalk {

/// Full description of one seeded episode. Defaults give the canonical
/// scenario: 5 agents on a 5x5 grid, gain 1/13, tolerance 0.01, feature
/// on nodes {4, 5, 6}, co-location communication, 1 s per step.
struct EpisodeConfig {
  int grid_dim = 5;
  double spacing = 1.0;
  int agents = 5;
  double alpha = 1.0 / 13.0;
  double epsilon = 0.01;
  std::vector<int> feature_nodes{4, 5, 6};
  double xi_ref = 1.0;
  /// Reference noise level; interpreted as a variance unless
  /// noise_is_stddev is set. 0 disables noise.
  double noise = 0.0;
  bool noise_is_stddev = false;
  /// Draw one reference sample per gated agent instead of one shared
  /// sample per step.
  bool per_agent_noise = false;
  double comm_radius = 0.0;
  std::uint64_t seed = 0;
  long max_steps = 100000;
  bool record_history = false;
  double step_seconds = 1.0;

  double noise_variance() const {
    return noise_is_stddev ? noise * noise : noise;
  }

  void validate() const {
    if (grid_dim < 1) throw std::invalid_argument("grid_dim must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
    if (agents < 1) throw std::invalid_argument("agents must be >= 1");
    if (!(alpha > 0.0) || alpha >= alpha_upper_bound(agents))
      throw std::invalid_argument(
          "alpha must satisfy 0 < alpha < 1/(agents-1)");
    if (!(epsilon > 0.0) || epsilon >= 1.0)
      throw std::invalid_argument("epsilon must be in (0, 1)");
    for (int node : feature_nodes)
      if (node < 1 || node > grid_dim * grid_dim)
        throw std::invalid_argument("feature node outside the grid");
    if (xi_ref < 0.0) throw std::invalid_argument("xi_ref must be >= 0");
    if (noise < 0.0) throw std::invalid_argument("noise must be >= 0");
    if (comm_radius < 0.0)
      throw std::invalid_argument("comm_radius must be >= 0");
    // the grid diagonal is the largest meaningful communication radius
    const double diagonal =
        spacing * (grid_dim - 1) * std::numbers::sqrt2;
    if (comm_radius > diagonal)
      throw std::invalid_argument(
          "comm_radius exceeds the grid diagonal of " +
          std::to_string(diagonal));
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (!(step_seconds > 0.0))
      throw std::invalid_argument("step_seconds must be > 0");
  }
};

/// Pre-update snapshot of one step; the final entry of a recorded history
/// additionally carries the post-update information values.
struct StepRecord {
  long step = 0;
  AgentPositions nodes;
  Eigen::VectorXd xi;
  std::vector<std::uint8_t> gates;
  std::vector<std::pair<int, int>> comm_edges;
};

struct EpisodeResult {
  bool consensus_reached = false;
  long consensus_steps = -1;  ///< -1 when the step cap was hit
  double consensus_seconds = -1.0;
  Eigen::VectorXd final_xi;
  long detection_events = 0;  ///< agent-steps with an active gate
  std::uint64_t seed = 0;
  int union_edge_count = 0;    ///< edges in the union of all comm graphs
  bool union_complete = false; ///< union equals the complete graph K_N
  std::vector<StepRecord> history;  ///< filled iff record_history
};

/// Reference measurement: the nominal value exactly when variance is 0,
/// otherwise a Gaussian draw around it.
inline double sample_reference(double nominal, double variance,
                               RandomStream& rng) {
  if (variance < 0.0) throw std::invalid_argument("variance must be >= 0");
  if (variance == 0.0) return nominal;
  return rng.gaussian(nominal, std::sqrt(variance));
}

/// Runs one episode to consensus or the step cap.
///
/// Per step k: build the communication graph and gates from the current
/// positions, draw the reference sample (only on steps where a gate is
/// active), apply the synchronous update, test consensus against the
/// nominal reference, then move every agent. The walk stops where the
/// consensus test first passes; T_c = k+1 counts the updates performed.
///
/// The episode consumes one random stream in a fixed order (positions,
/// initial values, then per-step noise and movement draws), so equal
/// configs give bit-identical results.
inline EpisodeResult run_episode(const EpisodeConfig& config) {
  config.validate();

  const SpatialGrid grid = build_grid(config.grid_dim, config.spacing);
  const WalkSampler sampler(grid);
  RandomStream rng(config.seed);

  const int n = config.agents;
  AgentPositions positions = sample_initial_positions(grid, n, rng);

  InfoState state;
  state.xi.resize(n);
  for (int a = 0; a < n; ++a) state.xi(a) = rng.uniform01();
  state.xi_ref = config.xi_ref;
  state.alpha = config.alpha;

  const double variance = config.noise_variance();

  EpisodeResult result;
  result.seed = config.seed;
  CommGraph comm_union(n);
  Eigen::VectorXd refs(n);

  for (long k = 0; k < config.max_steps; ++k) {
    const CommGraph graph = comm_graph(positions, grid, config.comm_radius);
    state.gates = gates(positions, config.feature_nodes);

    int active = 0;
    for (auto g : state.gates) active += g;
    result.detection_events += active;

    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (graph.adjacent(a, b) && !comm_union.adjacent(a, b))
          comm_union.add_edge(a, b);

    refs.setConstant(config.xi_ref);
    if (variance > 0.0 && active > 0) {
      if (config.per_agent_noise) {
        for (int a = 0; a < n; ++a)
          if (state.gates[a])
            refs(a) = sample_reference(config.xi_ref, variance, rng);
      } else {
        refs.setConstant(sample_reference(config.xi_ref, variance, rng));
      }
    }

    if (config.record_history) {
      result.history.push_back(
          {k, positions, state.xi, state.gates, graph.edges()});
    }

    state.xi = consensus_step(state, graph, refs);

    if (consensus_reached(state.xi, config.xi_ref, config.epsilon)) {
      result.consensus_reached = true;
      result.consensus_steps = k + 1;
      result.consensus_seconds =
          static_cast<double>(k + 1) * config.step_seconds;
      break;
    }
    if (k + 1 < config.max_steps) {
      for (int a = 0; a < n; ++a)
        positions[a] = sampler.step(positions[a], rng);
    }
  }

  result.final_xi = state.xi;
  result.union_edge_count = comm_union.edge_count();
  result.union_complete = comm_union.is_complete();

  if (config.record_history) {
    // terminal snapshot: positions did not move after the last update
    result.history.push_back({result.consensus_reached
                                  ? result.consensus_steps
                                  : config.max_steps,
                              positions, state.xi,
                              gates(positions, config.feature_nodes),
                              comm_graph(positions, grid, config.comm_radius)
                                  .edges()});
  }
  return result;
}

}  // namespace gridwalk
