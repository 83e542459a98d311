#include "mpt/trackers/assignment.hpp"

#include <algorithm>
#include <cmath>

#include "mpt/core/error.hpp"

namespace mpt::trackers {

double Assignment::total_cost(const Eigen::MatrixXd& cost) const {
  double total = 0.0;
  for (const auto& [r, c] : pairs) total += cost(r, c);
  return total;
}

namespace {

// Assigns every row of an n x m matrix (n <= m) to a distinct column.
// row_of_col[j] = row assigned to column j, or -1.
std::vector<int> solve_rows_le_cols(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays with a virtual column 0, following the classic formulation.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_of_col(m, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_of_col[j - 1] = p[j] - 1;
  }
  return row_of_col;
}

}  // namespace

Assignment hungarian_assign(const Eigen::MatrixXd& cost, double gate) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (!cost.allFinite()) throw ValidationError("assignment costs must be finite");
  Assignment out;
  std::vector<int> col_of_row(rows, -1);
  if (rows > 0 && cols > 0) {
    if (rows <= cols) {
      const auto row_of_col = solve_rows_le_cols(cost);
      for (int j = 0; j < cols; ++j) {
        if (row_of_col[j] >= 0) col_of_row[row_of_col[j]] = j;
      }
    } else {
      const Eigen::MatrixXd t = cost.transpose();
      const auto row_of_col = solve_rows_le_cols(t);  // here: col index of original per original row
      for (int i = 0; i < rows; ++i) {
        if (row_of_col[i] >= 0) col_of_row[i] = row_of_col[i];
      }
    }
  }
  std::vector<char> col_used(cols, 0);
  for (int i = 0; i < rows; ++i) {
    const int j = col_of_row[i];
    if (j >= 0 && cost(i, j) <= gate) {
      out.pairs.emplace_back(i, j);
      col_used[j] = 1;
    } else {
      out.unmatched_rows.push_back(i);
    }
  }
  for (int j = 0; j < cols; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  return out;
}

}  // namespace mpt::trackers
