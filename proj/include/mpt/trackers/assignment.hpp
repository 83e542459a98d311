#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mpt::trackers {

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  ///< (row, col), sorted by row
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;

  /// Sum of cost(row, col) over `pairs`, accumulated in row order.
  double total_cost(const Eigen::MatrixXd& cost) const;
};

/// Minimum-cost one-to-one assignment of min(rows, cols) pairs (shortest
/// augmenting path with potentials, O(n^2 m)). Pairs whose cost exceeds `gate`
/// are dropped afterwards and reported as unmatched. Costs must be finite.
Assignment hungarian_assign(const Eigen::MatrixXd& cost,
                            double gate = std::numeric_limits<double>::infinity());

}  // namespace mpt::trackers
