#include "kronalign/matching.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "kronalign/errors.h"

namespace kronalign {

std::size_t Matching::size() const {
  return static_cast<std::size_t>(
      std::count_if(row_to_col.begin(), row_to_col.end(), [](int j) { return j >= 0; }));
}

void Matching::Add(int i, int j) {
  if (i < 0 || i >= rows() || j < 0 || j >= cols()) {
    throw ContractViolation("matched pair out of range");
  }
  if (row_to_col[i] >= 0 || col_to_row[j] >= 0) {
    throw ContractViolation("vertex matched twice");
  }
  row_to_col[i] = j;
  col_to_row[j] = i;
}

void Matching::Remove(int i) {
  if (i < 0 || i >= rows() || row_to_col[i] < 0) return;
  col_to_row[row_to_col[i]] = -1;
  row_to_col[i] = -1;
}

std::vector<std::pair<int, int>> Matching::Pairs() const {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < rows(); ++i) {
    if (row_to_col[i] >= 0) pairs.emplace_back(i, row_to_col[i]);
  }
  return pairs;
}

bool Matching::Valid() const {
  for (int i = 0; i < rows(); ++i) {
    const int j = row_to_col[i];
    if (j < -1 || j >= cols()) return false;
    if (j >= 0 && col_to_row[j] != i) return false;
  }
  for (int j = 0; j < cols(); ++j) {
    const int i = col_to_row[j];
    if (i < -1 || i >= rows()) return false;
    if (i >= 0 && row_to_col[i] != j) return false;
  }
  return true;
}

double MatchingWeight(const Matching& matching, const Eigen::MatrixXd& x) {
  double total = 0.0;
  for (int i = 0; i < matching.rows(); ++i) {
    if (matching.row_to_col[i] >= 0) total += x(i, matching.row_to_col[i]);
  }
  return total;
}

namespace {

void CheckFinite(const Eigen::MatrixXd& x) {
  if (!x.allFinite()) throw ContractViolation("matching weights must be finite");
}

// Minimum-cost assignment of every row of `cost` (rows <= cols) using
// shortest augmenting paths with potentials. Returns the column per row.
std::vector<int> Assign(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual start.
  std::vector<double> u(rows + 1, 0.0);
  std::vector<double> v(cols + 1, 0.0);
  std::vector<int> owner(cols + 1, 0);
  std::vector<int> way(cols + 1, 0);
  std::vector<double> min_slack(cols + 1);
  std::vector<char> used(cols + 1);
  for (int i = 1; i <= rows; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(rows, -1);
  for (int j = 1; j <= cols; ++j) {
    if (owner[j] != 0) result[owner[j] - 1] = j - 1;
  }
  return result;
}

}  // namespace

Matching MaxWeightMatching(const Eigen::MatrixXd& x) {
  CheckFinite(x);
  const int m = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  Matching matching(m, n);
  if (m == 0 || n == 0) return matching;
  const Eigen::MatrixXd benefit = x.cwiseMax(0.0);
  if (m <= n) {
    const auto cols = Assign(-benefit);
    for (int i = 0; i < m; ++i) {
      if (cols[i] >= 0 && x(i, cols[i]) > 0.0) matching.Add(i, cols[i]);
    }
  } else {
    const Eigen::MatrixXd transposed = -benefit.transpose();
    const auto rows = Assign(transposed);
    for (int j = 0; j < n; ++j) {
      if (rows[j] >= 0 && x(rows[j], j) > 0.0) matching.Add(rows[j], j);
    }
  }
  matching.weight = MatchingWeight(matching, x);
  return matching;
}

Matching GreedyMatching(const Eigen::MatrixXd& x) {
  CheckFinite(x);
  const int m = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  std::vector<std::tuple<double, int, int>> entries;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (x(i, j) > 0.0) entries.emplace_back(-x(i, j), i, j);
    }
  }
  std::sort(entries.begin(), entries.end());
  Matching matching(m, n);
  for (const auto& [neg, i, j] : entries) {
    if (matching.row_to_col[i] < 0 && matching.col_to_row[j] < 0) matching.Add(i, j);
  }
  matching.weight = MatchingWeight(matching, x);
  return matching;
}

std::size_t MotifsAligned(const Matching& matching, const MotifTensor& a,
                          const MotifTensor& b) {
  if (a.order() != b.order()) throw ContractViolation("motif orders differ");
  std::size_t count = 0;
  std::vector<int> image(a.order());
  for (std::size_t e = 0; e < a.nnz(); ++e) {
    bool complete = true;
    int t = 0;
    for (int v : a.hyperedge(e)) {
      const int j = v < matching.rows() ? matching.row_to_col[v] : -1;
      if (j < 0 || j >= b.dim()) {
        complete = false;
        break;
      }
      image[t++] = j;
    }
    if (!complete) continue;
    std::sort(image.begin(), image.end());
    if (b.Contains(image)) ++count;
  }
  return count;
}

std::size_t EdgesAligned(const Matching& matching, const Graph& a, const Graph& b) {
  std::size_t count = 0;
  for (auto [u, v] : a.Edges()) {
    if (u >= matching.rows() || v >= matching.rows()) continue;
    const int ju = matching.row_to_col[u];
    const int jv = matching.row_to_col[v];
    if (ju >= 0 && jv >= 0 && b.HasEdge(ju, jv)) ++count;
  }
  return count;
}

double Accuracy(const Matching& matching, const std::vector<int>& truth) {
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (static_cast<int>(i) < matching.rows() && truth[i] >= 0 &&
        matching.row_to_col[i] == truth[i]) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace kronalign
