// Test-only oracles, implemented independently of the library code paths
// they check.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// 4-neighbor lattice adjacency by brute-force coordinate comparison.
/// Nodes are 1-based, row-major from the bottom-left. Self-edges excluded.
inline std::set<std::pair<int, int>> lattice_edges(int c) {
  std::set<std::pair<int, int>> edges;
  auto row = [c](int node) { return (node - 1) / c; };
  auto col = [c](int node) { return (node - 1) % c; };
  for (int i = 1; i <= c * c; ++i) {
    for (int j = 1; j <= c * c; ++j) {
      if (i == j) continue;
      const int dr = std::abs(row(i) - row(j));
      const int dc = std::abs(col(i) - col(j));
      if (dr + dc == 1) edges.insert({i, j});
    }
  }
  return edges;
}

inline int lattice_degree(int c, int node) {
  int deg = 0;
  for (const auto& [i, j] : lattice_edges(c))
    if (i == node) ++deg;
  return deg;
}

/// Kronecker product, the textbook definition.
inline Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b;
  return out;
}

/// Detailed-balance stationary distribution of the lazy grid walk:
/// pi_i proportional to (lattice degree + 1).
inline Eigen::RowVectorXd degree_stationary(int c) {
  const int s = c * c;
  Eigen::RowVectorXd pi(s);
  double total = 0.0;
  for (int i = 1; i <= s; ++i) {
    pi(i - 1) = lattice_degree(c, i) + 1.0;
    total += pi(i - 1);
  }
  return pi / total;
}

/// Dense matrix power by repeated multiplication.
inline Eigen::MatrixXd matrix_power(Eigen::MatrixXd m, int k) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

}  // namespace oracle
