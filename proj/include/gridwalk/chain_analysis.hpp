#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridwalk/grid.hpp"
#include "gridwalk/mobility.hpp"
#include "gridwalk/network.hpp"
#include "gridwalk/random.hpp"

namespace gridwalk {

/// Number of joint states S^N, or over_limit if it exceeds `limit`.
inline std::uint64_t composite_state_count(int states, int agents,
                                           std::uint64_t limit) {
  std::uint64_t total = 1;
  for (int a = 0; a < agents; ++a) {
    if (total > limit / static_cast<std::uint64_t>(states)) return limit + 1;
    total *= static_cast<std::uint64_t>(states);
  }
  return total;
}

/// Flat 1-based index of a joint agent configuration. Agent 1 varies
/// fastest: flat = 1 + sum_a (node_a - 1) * S^(a-1), so for N=2 the
/// flattening matches the standard Kronecker-product block layout.
inline std::uint64_t composite_flatten(const std::vector<int>& nodes,
                                       int states) {
  std::uint64_t flat = 0;
  std::uint64_t stride = 1;
  for (int node : nodes) {
    if (node < 1 || node > states)
      throw std::out_of_range("composite entry outside 1..S");
    flat += static_cast<std::uint64_t>(node - 1) * stride;
    stride *= static_cast<std::uint64_t>(states);
  }
  return flat + 1;
}

/// Inverse of composite_flatten.
inline std::vector<int> composite_unflatten(std::uint64_t flat, int states,
                                            int agents) {
  std::vector<int> nodes(agents);
  std::uint64_t rest = flat - 1;
  for (int a = 0; a < agents; ++a) {
    nodes[a] = static_cast<int>(rest % static_cast<std::uint64_t>(states)) + 1;
    rest /= static_cast<std::uint64_t>(states);
  }
  return nodes;
}

/// Stationary distribution by power iteration on pi <- pi P with L1
/// normalization. Converges geometrically for aperiodic irreducible
/// chains (grid walks are both, thanks to the self-loops).
inline OccupancyPmf stationary_distribution(const TransitionMatrix& tm,
                                            double tol = 1e-12,
                                            long max_iterations = 1000000) {
  const int s = tm.state_count();
  OccupancyPmf pi = OccupancyPmf::Constant(s, 1.0 / static_cast<double>(s));
  for (long it = 0; it < max_iterations; ++it) {
    OccupancyPmf next = pi * tm.matrix();
    next /= next.sum();
    const double residual = (next - pi).cwiseAbs().maxCoeff();
    pi = next;
    if (residual < tol) return pi;
  }
  throw std::runtime_error(
      "power iteration did not converge; chain may be reducible or periodic");
}

/// True iff the support digraph of the matrix is strongly connected
/// (reachability from state 1 along forward and reversed edges).
inline bool is_irreducible(const TransitionMatrix& tm) {
  const int s = tm.state_count();
  const auto& p = tm.matrix();
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(s, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < s; ++j) {
        const double w = forward ? p(i, j) : p(j, i);
        if (w > 0.0 && !seen[j]) {
          seen[j] = 1;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == s;
  };
  return reaches_all(true) && reaches_all(false);
}

/// Joint transition matrix of `agents` independent copies of the chain:
/// q(i, j) = prod_a p(i(a), j(a)) under the composite_flatten convention.
/// Refuses to build more than `state_cap` joint states.
inline TransitionMatrix composite_chain(const TransitionMatrix& tm, int agents,
                                        std::uint64_t state_cap = 10000) {
  if (agents < 1) throw std::invalid_argument("agent count must be >= 1");
  if (agents == 1) return tm;
  const int s = tm.state_count();
  const std::uint64_t m = composite_state_count(s, agents, state_cap);
  if (m > state_cap)
    throw std::invalid_argument(
        "composite state count S^N exceeds the cap of " +
        std::to_string(state_cap) + " states");

  const auto& p = tm.matrix();
  RowMatrixXd q(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<int> from(agents), to(agents);
  for (std::uint64_t i = 0; i < m; ++i) {
    from = composite_unflatten(i + 1, s, agents);
    for (std::uint64_t j = 0; j < m; ++j) {
      to = composite_unflatten(j + 1, s, agents);
      double prob = 1.0;
      for (int a = 0; a < agents; ++a) {
        prob *= p(from[a] - 1, to[a] - 1);
        if (prob == 0.0) break;
      }
      q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = prob;
    }
  }
  return TransitionMatrix(std::move(q));
}

/// Bundled numerical checks for one (c, N) scenario.
struct VerifyReport {
  int grid_dim = 0;
  int agents = 0;
  int states = 0;

  double p_row_sum_error = 0.0;
  bool p_row_stochastic = false;
  bool p_irreducible = false;
  double stationary_residual = 0.0;
  double stationary_vs_degree_form = 0.0;  ///< max |pi_i - (d_i+1)/sum|
  bool stationary_matches = false;

  bool composite_built = false;  ///< false when S^N exceeds the cap
  std::uint64_t composite_states = 0;
  std::uint64_t composite_cap = 0;
  double q_row_sum_error = 0.0;
  bool q_row_stochastic = false;
  bool q_irreducible = false;

  long union_steps = -1;  ///< walk steps until the union became complete
  bool union_complete = false;
  bool feature_rooted = false;  ///< every union component saw the feature

  bool pass = false;
};

namespace detail {

/// Sampled-walk union statistic: evolve N independent walkers and union
/// their co-location graphs until the union is complete (or the horizon
/// runs out). Also tracks which agents ever stood on a feature node, to
/// check that information could have flowed from the feature into every
/// union component.
inline void union_walk_statistic(const SpatialGrid& grid,
                                 const TransitionMatrix& tm, int agents,
                                 const std::vector<int>& feature_nodes,
                                 long horizon, std::uint64_t seed,
                                 VerifyReport& report) {
  RandomStream rng(seed);
  AgentPositions pos = sample_initial_positions(grid, agents, rng);
  CommGraph acc(agents);
  std::vector<char> visited_feature(agents, 0);
  report.union_steps = -1;
  for (long k = 0; k < horizon; ++k) {
    for (int a = 0; a < agents; ++a) {
      for (int node : feature_nodes)
        if (pos[a] == node) visited_feature[a] = 1;
      for (int b = a + 1; b < agents; ++b)
        if (pos[a] == pos[b] && !acc.adjacent(a, b)) acc.add_edge(a, b);
    }
    if (report.union_steps < 0 && acc.is_complete()) report.union_steps = k;
    if (report.union_steps >= 0 &&
        std::all_of(visited_feature.begin(), visited_feature.end(),
                    [](char v) { return v != 0; }))
      break;
    for (int a = 0; a < agents; ++a) pos[a] = sample_step(tm, pos[a], rng);
  }
  report.union_complete = report.union_steps >= 0;

  // component-wise feature reachability over the accumulated union
  std::vector<int> component(agents);
  std::iota(component.begin(), component.end(), 0);
  for (int pass = 0; pass < agents; ++pass)
    for (int a = 0; a < agents; ++a)
      for (int b = 0; b < agents; ++b)
        if (acc.adjacent(a, b))
          component[a] = component[b] = std::min(component[a], component[b]);
  report.feature_rooted = true;
  for (int a = 0; a < agents; ++a) {
    bool rooted = false;
    for (int b = 0; b < agents; ++b)
      if (component[b] == component[a] && visited_feature[b]) rooted = true;
    if (!rooted) report.feature_rooted = false;
  }
}

}  // namespace detail

/// Runs the bundled chain checks for a c x c grid with N agents. Failures
/// land in the report, not in exceptions; composite checks are skipped
/// (composite_built = false) when S^N exceeds the cap.
inline VerifyReport verify_report(int grid_dim, int agents,
                                  std::uint64_t composite_cap = 10000,
                                  std::uint64_t seed = 1,
                                  long union_horizon = 10000) {
  VerifyReport report;
  report.grid_dim = grid_dim;
  report.agents = agents;
  report.composite_cap = composite_cap;

  const SpatialGrid grid = build_grid(grid_dim, 1.0);
  const TransitionMatrix p = transition_matrix(grid);
  const int s = grid.node_count();
  report.states = s;

  report.p_row_sum_error =
      (p.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff();
  report.p_row_stochastic = report.p_row_sum_error < 1e-12;
  report.p_irreducible = is_irreducible(p);

  // Tighter residual than the 1e-12 default: the iteration error is
  // amplified by ~1/gap, and the c=20 grid's spectral gap is ~5e-3.
  const OccupancyPmf pi = stationary_distribution(p, 1e-13);
  report.stationary_residual =
      ((pi * p.matrix()) - pi).cwiseAbs().maxCoeff();

  double weight_sum = 0.0;
  for (int i = 1; i <= s; ++i) weight_sum += grid.lattice_degree(i) + 1;
  double worst = 0.0;
  for (int i = 1; i <= s; ++i) {
    const double expected = (grid.lattice_degree(i) + 1) / weight_sum;
    worst = std::max(worst, std::abs(pi(i - 1) - expected));
  }
  report.stationary_vs_degree_form = worst;
  report.stationary_matches = worst < 1e-10;

  report.composite_states = composite_state_count(s, agents, composite_cap);
  if (report.composite_states <= composite_cap) {
    const TransitionMatrix q = composite_chain(p, agents, composite_cap);
    report.composite_built = true;
    report.q_row_sum_error =
        (q.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff();
    report.q_row_stochastic = report.q_row_sum_error < 1e-12;
    report.q_irreducible = is_irreducible(q);
  }

  std::vector<int> feature_nodes;
  for (int node : {4, 5, 6})
    if (node <= s) feature_nodes.push_back(node);
  if (feature_nodes.empty()) feature_nodes.push_back(s);
  detail::union_walk_statistic(grid, p, agents, feature_nodes, union_horizon,
                               seed, report);

  report.pass = report.p_row_stochastic && report.p_irreducible &&
                report.stationary_residual < 1e-10 &&
                report.stationary_matches &&
                (!report.composite_built ||
                 (report.q_row_stochastic && report.q_irreducible)) &&
                report.union_complete && report.feature_rooted;
  return report;
}

}  // namespace gridwalk
