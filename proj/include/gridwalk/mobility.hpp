#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "gridwalk/grid.hpp"
#include "gridwalk/random.hpp"

namespace gridwalk {

/// Node occupied by each agent, 1-based, indexed by agent order.
using AgentPositions = std::vector<int>;

/// Probability mass over the grid nodes (row vector of length S).
using OccupancyPmf = Eigen::RowVectorXd;

/// Independent uniform deployment of `agents` agents over the grid nodes.
/// Consumes one draw per agent in agent order.
inline AgentPositions sample_initial_positions(const SpatialGrid& grid,
                                               int agents,
                                               RandomStream& rng) {
  if (agents < 1) throw std::invalid_argument("agent count must be >= 1");
  AgentPositions positions(agents);
  for (int a = 0; a < agents; ++a)
    positions[a] = rng.uniform_index(grid.node_count()) + 1;
  return positions;
}

/// One transition of the walk: inverse-CDF over row `current`, scanning
/// columns in ascending order. Zero-probability columns can never be
/// selected since they leave the running sum unchanged.
inline int sample_step(const TransitionMatrix& tm, int current,
                       RandomStream& rng) {
  tm.check_state(current);
  const auto& p = tm.matrix();
  const double u = rng.uniform01();
  double cum = 0.0;
  int last_positive = current;
  for (int j = 0; j < tm.state_count(); ++j) {
    const double pj = p(current - 1, j);
    if (pj <= 0.0) continue;
    cum += pj;
    last_positive = j + 1;
    if (u < cum) return j + 1;
  }
  // u fell into the rounding slack above the accumulated row sum
  return last_positive;
}

/// One step of the occupancy dynamics: returns pmf * P.
inline OccupancyPmf evolve_distribution(const TransitionMatrix& tm,
                                        const OccupancyPmf& pmf) {
  if (pmf.size() != tm.state_count())
    throw std::invalid_argument("pmf length does not match state count");
  return pmf * tm.matrix();
}

/// Grid-walk sampler that reproduces sample_step(transition_matrix(grid),
/// node, rng) bit-exactly without touching the dense matrix: the row's
/// nonzero entries are the same 1/(d_i+1) value over the ascending
/// neighbor list, and skipping the zero entries leaves the running
/// inverse-CDF sum unchanged.
class WalkSampler {
 public:
  explicit WalkSampler(const SpatialGrid& grid) : grid_(&grid) {}

  int step(int node, RandomStream& rng) const {
    const auto& succ = grid_->neighbors_with_self(node);
    const double w = 1.0 / static_cast<double>(succ.size());
    const double u = rng.uniform01();
    double cum = 0.0;
    for (int j : succ) {
      cum += w;
      if (u < cum) return j;
    }
    return succ.back();
  }

 private:
  const SpatialGrid* grid_;
};

}  // namespace gridwalk
