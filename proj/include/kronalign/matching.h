#ifndef KRONALIGN_MATCHING_H_
#define KRONALIGN_MATCHING_H_

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kronalign/graph.h"
#include "kronalign/motif_tensor.h"

namespace kronalign {

// Partial one-to-one correspondence between rows [0, m) and columns [0, n).
struct Matching {
  Matching() = default;
  Matching(int m, int n) : row_to_col(m, -1), col_to_row(n, -1) {}

  int rows() const { return static_cast<int>(row_to_col.size()); }
  int cols() const { return static_cast<int>(col_to_row.size()); }
  std::size_t size() const;
  // Both endpoints must be free.
  void Add(int i, int j);
  void Remove(int i);
  // (i, j) pairs ordered by i.
  std::vector<std::pair<int, int>> Pairs() const;
  // Checks that the two maps are consistent inverses.
  bool Valid() const;

  friend bool operator==(const Matching&, const Matching&) = default;

  std::vector<int> row_to_col;
  std::vector<int> col_to_row;
  double weight = 0.0;
};

// Sum of x(i, j) over the pairs, accumulated in row order.
double MatchingWeight(const Matching& matching, const Eigen::MatrixXd& x);

// Exact maximum-weight matching (Hungarian algorithm on max(x, 0)). Pairs
// with x(i, j) <= 0 are left out, so the result may be partial. Among equal
// optima the row-major scan order decides. Throws ContractViolation for
// non-finite entries.
Matching MaxWeightMatching(const Eigen::MatrixXd& x);

// Greedy 1/2-approximation: repeatedly takes the largest positive entry.
Matching GreedyMatching(const Eigen::MatrixXd& x);

// Hyperedges of a whose vertices are all matched onto a hyperedge of b.
std::size_t MotifsAligned(const Matching& matching, const MotifTensor& a,
                          const MotifTensor& b);

std::size_t EdgesAligned(const Matching& matching, const Graph& a, const Graph& b);

// Fraction of reference vertices i < truth.size() with matching i -> truth[i].
double Accuracy(const Matching& matching, const std::vector<int>& truth);

}  // namespace kronalign

#endif  // KRONALIGN_MATCHING_H_
