#pragma once

#include <Eigen/Dense>

#include <vector>

namespace vbmot {

struct Assignment {
  /// row_to_col[r] = assigned column, or -1 when r is left unassigned
  /// (only possible for rows > cols).
  std::vector<int> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost assignment on a rectangular matrix (Kuhn-Munkres with
/// potentials, O(n^2 m)). Every row is assigned when rows <= cols, every
/// column otherwise.
Assignment solve_assignment(const Eigen::MatrixXd& cost);

/// Minimum-cost transport between uniform masses 1/rows and 1/cols
/// (successive shortest paths on integer-scaled supplies). Returns the
/// optimal total cost.
double solve_uniform_transport(const Eigen::MatrixXd& cost);

}  // namespace vbmot
