#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gridwalk/mobility.hpp"
#include "gridwalk/network.hpp"

namespace gridwalk {

/// Upper bound on the consensus gain: 1/(N-1), the reciprocal of the
/// largest possible communication degree. Unbounded for a single agent.
inline double alpha_upper_bound(int agents) {
  return agents > 1 ? 1.0 / static_cast<double>(agents - 1)
                    : std::numeric_limits<double>::infinity();
}

/// Information state of the agent group at one step.
struct InfoState {
  Eigen::VectorXd xi;               ///< per-agent information values
  double xi_ref = 1.0;              ///< nominal reference value
  double alpha = 1.0 / 13.0;        ///< neighbor coupling gain
  std::vector<std::uint8_t> gates;  ///< 1 where the agent detects the feature
};

/// Detection gates: gate a is 1 exactly when agent a occupies one of the
/// feature nodes.
inline std::vector<std::uint8_t> gates(const AgentPositions& positions,
                                       const std::vector<int>& feature_nodes) {
  std::vector<std::uint8_t> g(positions.size(), 0);
  for (std::size_t a = 0; a < positions.size(); ++a)
    g[a] = std::find(feature_nodes.begin(), feature_nodes.end(),
                     positions[a]) != feature_nodes.end()
               ? 1
               : 0;
  return g;
}

/// Synchronous gated update, one reference sample per agent:
///   xi_a' = xi_a - alpha * sum_{b ~ a} (xi_a - xi_b) - g_a (xi_a - ref_a)
/// Every agent reads the pre-update vector.
inline Eigen::VectorXd consensus_step(const InfoState& state,
                                      const CommGraph& graph,
                                      const Eigen::VectorXd& xi_r_samples) {
  const int n = graph.agents();
  if (state.xi.size() != n || static_cast<int>(state.gates.size()) != n ||
      xi_r_samples.size() != n)
    throw std::invalid_argument("info state does not match agent count");
  if (!(state.alpha > 0.0))
    throw std::invalid_argument("consensus gain must be > 0");

  Eigen::VectorXd next(n);
  for (int a = 0; a < n; ++a) {
    double coupling = 0.0;
    for (int b = 0; b < n; ++b)
      if (graph.adjacent(a, b)) coupling += state.xi(a) - state.xi(b);
    next(a) = state.xi(a) - state.alpha * coupling;
    if (state.gates[a]) next(a) -= state.xi(a) - xi_r_samples(a);
  }
  return next;
}

/// Same update with one shared reference sample for all gated agents.
inline Eigen::VectorXd consensus_step(const InfoState& state,
                                      const CommGraph& graph,
                                      double xi_r_sample) {
  return consensus_step(
      state, graph,
      Eigen::VectorXd::Constant(graph.agents(), xi_r_sample));
}

/// Matrix form of the update on the augmented vector (xi; xi_ref):
///   H = [ I - alpha L - diag(g)   g ]
///       [ 0                       1 ]
/// Row-stochastic by construction; applying H reproduces consensus_step.
inline Eigen::MatrixXd update_matrix(const CommGraph& graph,
                                     const std::vector<std::uint8_t>& g,
                                     double alpha) {
  const int n = graph.agents();
  if (static_cast<int>(g.size()) != n)
    throw std::invalid_argument("gate vector does not match agent count");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
  h.topLeftCorner(n, n) =
      Eigen::MatrixXd::Identity(n, n) - alpha * laplacian(graph);
  for (int a = 0; a < n; ++a) {
    if (g[a]) {
      h(a, a) -= 1.0;
      h(a, n) = 1.0;
    }
  }
  h(n, n) = 1.0;
  return h;
}

/// Consensus test: every agent within epsilon of the nominal reference.
inline bool consensus_reached(const Eigen::VectorXd& xi, double xi_ref_nominal,
                              double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  return ((xi.array() - xi_ref_nominal).abs() < epsilon).all();
}

}  // namespace gridwalk
