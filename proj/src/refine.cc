#include "kronalign/refine.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "kronalign/errors.h"

namespace kronalign {

std::vector<int> KnnEmbeddingNeighbors(const Eigen::MatrixXd& f, int row, int k) {
  const int rows = static_cast<int>(f.rows());
  if (row < 0 || row >= rows) throw ContractViolation("query row out of range");
  if (k < 1 || k >= rows) {
    throw ContractViolation("k must be in [1, " + std::to_string(rows - 1) + "]");
  }
  std::vector<std::pair<double, int>> dist;
  dist.reserve(rows - 1);
  for (int j = 0; j < rows; ++j) {
    if (j != row) dist.emplace_back((f.row(j) - f.row(row)).squaredNorm(), j);
  }
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<int> out(k);
  for (int t = 0; t < k; ++t) out[t] = dist[t].second;
  return out;
}

std::vector<std::vector<int>> KnnTable(const Eigen::MatrixXd& f, int k) {
  std::vector<std::vector<int>> table(f.rows());
  for (int i = 0; i < f.rows(); ++i) table[i] = KnnEmbeddingNeighbors(f, i, k);
  return table;
}

AlignmentScore ScoreMatching(const Matching& matching, const Graph& a, const Graph& b,
                             const MotifTensor& ta, const MotifTensor& tb) {
  return {MotifsAligned(matching, ta, tb), EdgesAligned(matching, a, b)};
}

namespace {

class SwapSearch {
 public:
  SwapSearch(Matching& matching, const Graph& a, const Graph& b, const MotifTensor& ta,
             const MotifTensor& tb)
      : matching_(matching), a_(a), b_(b), ta_(ta), tb_(tb), incidence_(IncidenceLists(ta)) {
    image_.resize(ta.order());
  }

  // Applies the move "row i takes column j" (exchanging partners when j is
  // taken) if it improves the local score. Returns whether it was kept.
  bool TryRowMove(int i, int j) {
    const int old_j = matching_.row_to_col[i];
    if (old_j == j) return false;
    const int p = matching_.col_to_row[j];
    rows_.assign({i});
    if (p >= 0) rows_.push_back(p);
    const AlignmentScore before = Local();
    matching_.Remove(i);
    if (p >= 0) matching_.Remove(p);
    matching_.Add(i, j);
    if (p >= 0 && old_j >= 0) matching_.Add(p, old_j);
    if (before < Local()) return true;
    matching_.Remove(i);
    if (p >= 0) matching_.Remove(p);
    if (old_j >= 0) matching_.Add(i, old_j);
    if (p >= 0) matching_.Add(p, j);
    return false;
  }

  // Applies "column j takes row i" (exchanging partners when i is taken).
  bool TryColMove(int i, int j) {
    const int old_i = matching_.col_to_row[j];
    if (old_i == i) return false;
    const int q = matching_.row_to_col[i];
    rows_.clear();
    rows_.push_back(i);
    if (old_i >= 0) rows_.push_back(old_i);
    const AlignmentScore before = Local();
    matching_.Remove(i);
    if (old_i >= 0) matching_.Remove(old_i);
    matching_.Add(i, j);
    if (old_i >= 0 && q >= 0) matching_.Add(old_i, q);
    if (before < Local()) return true;
    matching_.Remove(i);
    if (old_i >= 0) matching_.Remove(old_i);
    if (q >= 0) matching_.Add(i, q);
    if (old_i >= 0) matching_.Add(old_i, j);
    return false;
  }

 private:
  // Score restricted to hyperedges and edges touching rows_.
  AlignmentScore Local() {
    AlignmentScore score;
    edges_.clear();
    for (int r : rows_) edges_.insert(edges_.end(), incidence_[r].begin(), incidence_[r].end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (std::size_t e : edges_) score.motifs += MotifAligned(e);
    for (std::size_t s = 0; s < rows_.size(); ++s) {
      const int r = rows_[s];
      const int jr = matching_.row_to_col[r];
      if (jr < 0) continue;
      for (int w : a_.neighbors(r)) {
        // Count an edge between two affected rows once.
        if (std::find(rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(s), w) !=
            rows_.begin() + static_cast<std::ptrdiff_t>(s)) {
          continue;
        }
        const int jw = matching_.row_to_col[w];
        if (jw >= 0 && b_.HasEdge(jr, jw)) ++score.edges;
      }
    }
    return score;
  }

  bool MotifAligned(std::size_t e) {
    int t = 0;
    for (int v : ta_.hyperedge(e)) {
      const int j = matching_.row_to_col[v];
      if (j < 0) return false;
      image_[t++] = j;
    }
    std::sort(image_.begin(), image_.end());
    return tb_.Contains(image_);
  }

  Matching& matching_;
  const Graph& a_;
  const Graph& b_;
  const MotifTensor& ta_;
  const MotifTensor& tb_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::vector<int> rows_;
  std::vector<std::size_t> edges_;
  std::vector<int> image_;
};

std::vector<int> Union(const std::vector<int>& knn, std::span<const int> graph_neighbors) {
  std::vector<int> out(knn);
  out.insert(out.end(), graph_neighbors.begin(), graph_neighbors.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

LocalSearchResult LocalSearch(const Matching& matching, const Graph& a, const Graph& b,
                              const MotifTensor& ta, const MotifTensor& tb,
                              const FactorPair& factors, const RefineOptions& options) {
  const int m = a.n();
  const int n = b.n();
  if (matching.rows() != m || matching.cols() != n) {
    throw ContractViolation("matching does not fit the graphs");
  }
  if (ta.dim() != m || tb.dim() != n || ta.order() != tb.order()) {
    throw ContractViolation("motif tensors do not fit the graphs");
  }
  if (factors.u.rows() != m || factors.v.rows() != n || factors.u.cols() != factors.v.cols()) {
    throw ContractViolation("factors do not fit the graphs");
  }
  LocalSearchResult result;
  result.matching = matching;
  const int knn = options.knn ? *options.knn : 2 * factors.rank();
  if (knn < 1) throw ContractViolation("knn must be positive");
  result.knn = knn;
  if (matching.size() == 0) return result;

  const auto knn_u = m > 1 ? KnnTable(factors.u, std::min(knn, m - 1))
                           : std::vector<std::vector<int>>(m);
  const auto knn_v = n > 1 ? KnnTable(factors.v, std::min(knn, n - 1))
                           : std::vector<std::vector<int>>(n);
  Matching& current = result.matching;
  SwapSearch search(current, a, b, ta, tb);
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    std::vector<std::tuple<double, int, int>> order;
    for (auto [i, j] : current.Pairs()) {
      order.emplace_back(-factors.u.row(i).dot(factors.v.row(j)), i, j);
    }
    std::sort(order.begin(), order.end());
    std::size_t swaps = 0;
    for (const auto& [neg, i, ip] : order) {
      if (current.row_to_col[i] != ip) continue;
      bool moved = false;
      for (int jp : Union(knn_v[ip], b.neighbors(ip))) {
        if (search.TryRowMove(i, jp)) {
          moved = true;
          break;
        }
      }
      if (!moved) {
        for (int j : Union(knn_u[i], a.neighbors(i))) {
          if (search.TryColMove(j, ip)) {
            moved = true;
            break;
          }
        }
      }
      swaps += moved;
    }
    result.sweeps = sweep + 1;
    result.swaps += swaps;
    if (swaps == 0) break;
  }
  return result;
}

}  // namespace kronalign
