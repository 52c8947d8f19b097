#include "kronalign/graph.h"

#include <algorithm>
#include <string>

#include "kronalign/errors.h"
#include "kronalign/util.h"

namespace kronalign {

Graph::Graph(int n) {
  if (n < 0) throw ContractViolation("vertex count must be nonnegative");
  adjacency_.resize(n);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ContractViolation("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") out of range");
    }
    if (u == v) throw ContractViolation("self-loop at vertex " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  edge_count_ = 0;
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    edge_count_ += list.size();
  }
  edge_count_ /= 2;
}

bool Graph::HasEdge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n() || v >= n()) return false;
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const int target = &a == &adjacency_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), target);
}

std::vector<std::pair<int, int>> Graph::Edges() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edge_count_);
  for (int u = 0; u < n(); ++u) {
    for (int v : adjacency_[u]) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return edges;
}

namespace {

// Extends `clique` by vertices of `candidates` (all adjacent to every member
// and larger than its last vertex).
void Extend(const Graph& graph, int k, std::vector<int>& clique,
            const std::vector<int>& candidates, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(clique.size()) == k) {
    out.push_back(clique);
    return;
  }
  const std::size_t need = static_cast<std::size_t>(k) - clique.size();
  std::vector<int> next;
  for (std::size_t c = 0; c + need <= candidates.size(); ++c) {
    const int v = candidates[c];
    clique.push_back(v);
    if (need == 1) {
      out.push_back(clique);
    } else {
      next.clear();
      const auto nb = graph.neighbors(v);
      std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(c) + 1,
                            candidates.end(), nb.begin(), nb.end(), std::back_inserter(next));
      if (next.size() + 1 >= need) Extend(graph, k, clique, next, out);
    }
    clique.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> EnumerateCliques(const Graph& graph, int k) {
  if (k < kMinCliqueOrder || k > kMaxCliqueOrder) {
    throw ContractViolation("clique order must be in [2, 9], got " + std::to_string(k));
  }
  std::vector<std::vector<int>> out;
  std::vector<int> clique;
  std::vector<int> candidates;
  for (int v = 0; v < graph.n(); ++v) {
    const auto nb = graph.neighbors(v);
    candidates.assign(std::upper_bound(nb.begin(), nb.end(), v), nb.end());
    if (static_cast<int>(candidates.size()) < k - 1) continue;
    clique.assign(1, v);
    Extend(graph, k, clique, candidates, out);
  }
  return out;
}

MotifTensor CliqueTensor(const Graph& graph, int k) {
  auto cliques = EnumerateCliques(graph, k);
  if (cliques.empty()) {
    Warn("graph has no " + std::to_string(k) + "-cliques; motif tensor is empty");
  }
  return MotifTensor(k, graph.n(), std::move(cliques));
}

}  // namespace kronalign
