#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridwalk {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square lattice of side_count x side_count nodes spaced `spacing` meters
/// apart. Node ids are 1-based and run row-major from the bottom-left
/// corner: node 1 sits at (0, 0), node c at ((c-1)*spacing, 0), node c*c at
/// the top-right corner. Every node has a self-edge; `lattice_degree`
/// counts 4-neighborhood edges only (excluding self).
///
/// Immutable after construction and safe to share across threads.
class SpatialGrid {
 public:
  SpatialGrid(int side_count, double spacing)
      : side_(side_count), spacing_(spacing) {
    if (side_count < 1)
      throw std::invalid_argument("grid side count must be >= 1");
    if (!(spacing > 0.0))
      throw std::invalid_argument("grid spacing must be > 0");

    const int s = node_count();
    neighbors_.resize(s);
    for (int node = 1; node <= s; ++node) {
      auto& list = neighbors_[node - 1];
      const int r = row(node);
      const int col_ = col(node);
      // ascending node-id order: down, left, self, right, up
      if (r > 1) list.push_back(node - side_);
      if (col_ > 1) list.push_back(node - 1);
      list.push_back(node);
      if (col_ < side_) list.push_back(node + 1);
      if (r < side_) list.push_back(node + side_);
    }
  }

  int side_count() const { return side_; }
  double spacing() const { return spacing_; }
  int node_count() const { return side_ * side_; }

  /// 1-based row (1 = bottom) and column (1 = left) of a node.
  int row(int node) const { return (node - 1) / side_ + 1; }
  int col(int node) const { return (node - 1) % side_ + 1; }

  std::array<double, 2> coordinate(int node) const {
    check_node(node);
    return {(col(node) - 1) * spacing_, (row(node) - 1) * spacing_};
  }

  /// Lattice degree d_i: number of 4-neighbors, self-edge excluded.
  int lattice_degree(int node) const {
    check_node(node);
    return static_cast<int>(neighbors_[node - 1].size()) - 1;
  }

  /// Nodes reachable in one step (self included), ascending id order.
  const std::vector<int>& neighbors_with_self(int node) const {
    check_node(node);
    return neighbors_[node - 1];
  }

  bool has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    const auto& list = neighbors_[i - 1];
    return std::find(list.begin(), list.end(), j) != list.end();
  }

  /// Full edge set, self-edges included, both orientations of each
  /// undirected edge listed.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= node_count(); ++i)
      for (int j : neighbors_[i - 1]) out.emplace_back(i, j);
    return out;
  }

  void check_node(int node) const {
    if (node < 1 || node > node_count())
      throw std::out_of_range("node id " + std::to_string(node) +
                              " outside 1.." + std::to_string(node_count()));
  }

 private:
  int side_;
  double spacing_;
  std::vector<std::vector<int>> neighbors_;
};

/// Row-stochastic transition matrix over a finite state set. States are
/// 1-based in the public interface; storage is dense row-major.
class TransitionMatrix {
 public:
  /// Wraps an arbitrary matrix, validating stochasticity: square, entries
  /// >= 0, every row summing to 1 within 1e-12.
  explicit TransitionMatrix(RowMatrixXd probabilities)
      : p_(std::move(probabilities)) {
    if (p_.rows() != p_.cols())
      throw std::invalid_argument("transition matrix must be square");
    if (p_.rows() < 1)
      throw std::invalid_argument("transition matrix must be non-empty");
    for (Eigen::Index i = 0; i < p_.rows(); ++i) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < p_.cols(); ++j) {
        if (p_(i, j) < 0.0)
          throw std::invalid_argument("transition probabilities must be >= 0");
        sum += p_(i, j);
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("transition matrix row " +
                                    std::to_string(i + 1) +
                                    " does not sum to 1");
    }
  }

  int state_count() const { return static_cast<int>(p_.rows()); }

  /// p_ij for 1-based states i, j.
  double prob(int from, int to) const {
    check_state(from);
    check_state(to);
    return p_(from - 1, to - 1);
  }

  const RowMatrixXd& matrix() const { return p_; }

  void check_state(int s) const {
    if (s < 1 || s > state_count())
      throw std::out_of_range("state id " + std::to_string(s) +
                              " outside 1.." + std::to_string(state_count()));
  }

 private:
  RowMatrixXd p_;
};

inline SpatialGrid build_grid(int side_count, double spacing) {
  return SpatialGrid(side_count, spacing);
}

/// Uniform lazy-walk kernel on the grid: p_ij = 1/(d_i + 1) for every edge
/// (i, j) including the self-edge, 0 elsewhere.
inline TransitionMatrix transition_matrix(const SpatialGrid& grid) {
  const int s = grid.node_count();
  RowMatrixXd p = RowMatrixXd::Zero(s, s);
  for (int i = 1; i <= s; ++i) {
    const auto& succ = grid.neighbors_with_self(i);
    const double w = 1.0 / static_cast<double>(succ.size());
    for (int j : succ) p(i - 1, j - 1) = w;
  }
  return TransitionMatrix(std::move(p));
}

}  // namespace gridwalk
