#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridwalk/grid.hpp"
#include "gridwalk/mobility.hpp"

namespace gridwalk {

/// Symmetric 0/1 agent adjacency with zero diagonal. Agent ids are 0-based
/// here (plain vector indices); the grid's node ids stay 1-based.
class CommGraph {
 public:
  explicit CommGraph(int agents)
      : n_(agents), adj_(Eigen::MatrixXi::Zero(agents, agents)) {
    if (agents < 1) throw std::invalid_argument("agent count must be >= 1");
  }

  int agents() const { return n_; }

  bool adjacent(int a, int b) const { return adj_(a, b) != 0; }

  void add_edge(int a, int b) {
    if (a == b) throw std::invalid_argument("self-loops not allowed");
    adj_(a, b) = 1;
    adj_(b, a) = 1;
  }

  int degree(int a) const { return adj_.row(a).sum(); }

  int edge_count() const { return adj_.sum() / 2; }

  const Eigen::MatrixXi& adjacency() const { return adj_; }

  /// Undirected edge list with a < b, ascending.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (adj_(a, b)) out.emplace_back(a, b);
    return out;
  }

  bool is_complete() const { return edge_count() == n_ * (n_ - 1) / 2; }

 private:
  int n_;
  Eigen::MatrixXi adj_;
};

/// Communication graph at one step: agents a != b are adjacent iff the
/// Euclidean distance between their node coordinates is <= radius. With
/// radius 0 this reduces to co-location on the same node.
inline CommGraph comm_graph(const AgentPositions& positions,
                            const SpatialGrid& grid, double radius) {
  if (radius < 0.0)
    throw std::invalid_argument("communication radius must be >= 0");
  const int n = static_cast<int>(positions.size());
  CommGraph g(n);
  for (int a = 0; a < n; ++a) grid.check_node(positions[a]);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (radius == 0.0) {
        if (positions[a] == positions[b]) g.add_edge(a, b);
        continue;
      }
      const auto pa = grid.coordinate(positions[a]);
      const auto pb = grid.coordinate(positions[b]);
      const double dist = std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
      if (dist <= radius) g.add_edge(a, b);
    }
  }
  return g;
}

/// Graph Laplacian L = D - M. Integer-valued, so rows sum to zero exactly.
inline Eigen::MatrixXd laplacian(const CommGraph& g) {
  const int n = g.agents();
  Eigen::MatrixXd l = -g.adjacency().cast<double>();
  for (int a = 0; a < n; ++a) l(a, a) = static_cast<double>(g.degree(a));
  return l;
}

/// Edge-wise union of graphs over the same agent set.
inline CommGraph union_graph(std::span<const CommGraph> graphs) {
  if (graphs.empty()) throw std::invalid_argument("union of zero graphs");
  const int n = graphs.front().agents();
  CommGraph out(n);
  for (const auto& g : graphs) {
    if (g.agents() != n)
      throw std::invalid_argument("graphs in a union must share agent count");
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (g.adjacent(a, b)) out.add_edge(a, b);
  }
  return out;
}

}  // namespace gridwalk
