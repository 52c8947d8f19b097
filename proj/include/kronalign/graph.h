#ifndef KRONALIGN_GRAPH_H_
#define KRONALIGN_GRAPH_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "kronalign/motif_tensor.h"

namespace kronalign {

// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  explicit Graph(int n = 0);
  // Duplicate and reversed pairs are merged. Self-loops and out-of-range ids
  // throw ContractViolation.
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool HasEdge(int u, int v) const;

  // Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<int, int>> Edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;
  std::size_t edge_count_ = 0;
};

inline constexpr int kMinCliqueOrder = 2;
inline constexpr int kMaxCliqueOrder = 9;

// Every k-clique exactly once as a strictly increasing tuple, in
// lexicographic order. Requires 2 <= k <= 9.
std::vector<std::vector<int>> EnumerateCliques(const Graph& graph, int k);

// Order-k motif tensor of the k-cliques with unit weights. Warns when there
// are no cliques.
MotifTensor CliqueTensor(const Graph& graph, int k);

}  // namespace kronalign

#endif  // KRONALIGN_GRAPH_H_
