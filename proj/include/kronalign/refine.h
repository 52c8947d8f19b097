#ifndef KRONALIGN_REFINE_H_
#define KRONALIGN_REFINE_H_

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kronalign/align.h"
#include "kronalign/graph.h"
#include "kronalign/matching.h"
#include "kronalign/motif_tensor.h"

namespace kronalign {

// The k rows of `f` nearest to row `row` in 2-norm, excluding `row`, nearest
// first with ties broken by lower index. Requires 1 <= k < f.rows().
std::vector<int> KnnEmbeddingNeighbors(const Eigen::MatrixXd& f, int row, int k);

// KnnEmbeddingNeighbors for every row.
std::vector<std::vector<int>> KnnTable(const Eigen::MatrixXd& f, int k);

struct RefineOptions {
  // Neighbors per embedding query; unset means 2 * rank of the factors.
  std::optional<int> knn;
  int max_sweeps = 10;
};

struct AlignmentScore {
  std::size_t motifs = 0;
  std::size_t edges = 0;
  friend auto operator<=>(const AlignmentScore&, const AlignmentScore&) = default;
};

AlignmentScore ScoreMatching(const Matching& matching, const Graph& a, const Graph& b,
                             const MotifTensor& ta, const MotifTensor& tb);

struct LocalSearchResult {
  Matching matching;
  int sweeps = 0;
  std::size_t swaps = 0;
  int knn = 0;
};

// Greedy swap refinement. Matched pairs (i, i') are visited by decreasing
// U(i,:) . V(i',:). Candidates re-match i to an embedding neighbor or graph
// neighbor of i', or i' to one of i; a candidate whose new partner is taken
// exchanges partners. A swap is kept when it raises motifs aligned, or keeps
// it and raises edges aligned. Stops after a sweep without swaps or after
// max_sweeps.
LocalSearchResult LocalSearch(const Matching& matching, const Graph& a, const Graph& b,
                              const MotifTensor& ta, const MotifTensor& tb,
                              const FactorPair& factors, const RefineOptions& options = {});

}  // namespace kronalign

#endif  // KRONALIGN_REFINE_H_
