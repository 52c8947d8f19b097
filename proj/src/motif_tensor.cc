#include "kronalign/motif_tensor.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "kronalign/errors.h"
#include "kronalign/permanent.h"

namespace kronalign {

namespace {

void CheckLength(const MotifTensor& tensor, Eigen::Index length) {
  if (length != tensor.dim()) {
    throw ContractViolation("vector length " + std::to_string(length) +
                            " does not match tensor dimension " +
                            std::to_string(tensor.dim()));
  }
}

// Fills the permanent buffer for hyperedge e with output vertex at position
// `skip`: row t holds vector t evaluated at the remaining vertices.
template <typename Value>
double IncidentPermanent(std::span<const int> edge, int skip, Value&& value,
                         PermanentBuffer& buffer) {
  const int k = static_cast<int>(edge.size());
  for (int t = 0; t < k - 1; ++t) {
    int col = 0;
    for (int j = 0; j < k; ++j) {
      if (j == skip) continue;
      buffer[t * kMaxPermanent + col] = value(t, edge[j]);
      ++col;
    }
  }
  return Permanent(buffer, k - 1);
}

template <typename Value>
Eigen::VectorXd TtvMultiImpl(const MotifTensor& tensor, Value&& value) {
  const int k = tensor.order();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(tensor.dim());
  PermanentBuffer buffer{};
  for (std::size_t e = 0; e < tensor.nnz(); ++e) {
    const auto edge = tensor.hyperedge(e);
    const double w = tensor.weight(e);
    for (int pos = 0; pos < k; ++pos) {
      out[edge[pos]] += w * IncidentPermanent(edge, pos, value, buffer);
    }
  }
  return out;
}

}  // namespace

double Factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

MotifTensor::MotifTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 1) throw ContractViolation("tensor order must be positive");
  if (dim < 1) throw ContractViolation("tensor dimension must be positive");
}

MotifTensor::MotifTensor(int order, int dim,
                         std::vector<std::vector<int>> hyperedges,
                         std::vector<double> weights)
    : MotifTensor(order, dim) {
  if (weights.empty()) weights.assign(hyperedges.size(), 1.0);
  if (weights.size() != hyperedges.size()) {
    throw ContractViolation("weight count does not match hyperedge count");
  }
  for (std::size_t e = 0; e < hyperedges.size(); ++e) {
    const auto& edge = hyperedges[e];
    if (static_cast<int>(edge.size()) != order) {
      throw ContractViolation("hyperedge " + std::to_string(e) + " has " +
                              std::to_string(edge.size()) + " indices, expected " +
                              std::to_string(order));
    }
    for (int j = 0; j < order; ++j) {
      if (edge[j] < 0 || edge[j] >= dim) {
        throw ContractViolation("hyperedge " + std::to_string(e) +
                                " has an index out of range");
      }
      if (j > 0 && edge[j] <= edge[j - 1]) {
        throw ContractViolation("hyperedge " + std::to_string(e) +
                                " is not strictly increasing");
      }
    }
    if (!(weights[e] > 0.0)) {
      throw ContractViolation("hyperedge weights must be positive");
    }
  }
  std::vector<std::size_t> perm(hyperedges.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return hyperedges[a] < hyperedges[b];
  });
  indices_.reserve(hyperedges.size() * order);
  weights_.reserve(hyperedges.size());
  for (std::size_t idx = 0; idx < perm.size(); ++idx) {
    const auto& edge = hyperedges[perm[idx]];
    if (idx > 0 && edge == hyperedges[perm[idx - 1]]) {
      throw ContractViolation("duplicate hyperedge");
    }
    indices_.insert(indices_.end(), edge.begin(), edge.end());
    weights_.push_back(weights[perm[idx]]);
  }
}

namespace {

std::ptrdiff_t Find(const MotifTensor& tensor, std::span<const int> sorted) {
  std::size_t lo = 0;
  std::size_t hi = tensor.nnz();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto edge = tensor.hyperedge(mid);
    if (std::lexicographical_compare(edge.begin(), edge.end(), sorted.begin(),
                                     sorted.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < tensor.nnz()) {
    const auto edge = tensor.hyperedge(lo);
    if (std::equal(edge.begin(), edge.end(), sorted.begin(), sorted.end())) {
      return static_cast<std::ptrdiff_t>(lo);
    }
  }
  return -1;
}

}  // namespace

bool MotifTensor::Contains(std::span<const int> sorted) const {
  if (static_cast<int>(sorted.size()) != order_) return false;
  return Find(*this, sorted) >= 0;
}

double MotifTensor::Entry(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_) {
    throw ContractViolation("entry index has the wrong number of modes");
  }
  std::vector<int> sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return 0.0;
  }
  const auto e = Find(*this, sorted);
  return e < 0 ? 0.0 : weights_[static_cast<std::size_t>(e)];
}

std::vector<std::vector<int>> MotifTensor::Hyperedges() const {
  std::vector<std::vector<int>> out;
  out.reserve(nnz());
  for (std::size_t e = 0; e < nnz(); ++e) {
    const auto edge = hyperedge(e);
    out.emplace_back(edge.begin(), edge.end());
  }
  return out;
}

Eigen::VectorXd TtvSame(const MotifTensor& tensor, const Eigen::VectorXd& x) {
  CheckLength(tensor, x.size());
  const int k = tensor.order();
  const double scale = Factorial(k - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(tensor.dim());
  std::vector<double> prefix(k + 1);
  std::vector<double> suffix(k + 1);
  for (std::size_t e = 0; e < tensor.nnz(); ++e) {
    const auto edge = tensor.hyperedge(e);
    prefix[0] = 1.0;
    for (int j = 0; j < k; ++j) prefix[j + 1] = prefix[j] * x[edge[j]];
    suffix[k] = 1.0;
    for (int j = k - 1; j >= 0; --j) suffix[j] = suffix[j + 1] * x[edge[j]];
    const double w = scale * tensor.weight(e);
    for (int j = 0; j < k; ++j) {
      out[edge[j]] += w * prefix[j] * suffix[j + 1];
    }
  }
  return out;
}

double TtvScalar(const MotifTensor& tensor, const Eigen::VectorXd& x) {
  CheckLength(tensor, x.size());
  const int k = tensor.order();
  double total = 0.0;
  for (std::size_t e = 0; e < tensor.nnz(); ++e) {
    double prod = tensor.weight(e);
    for (int v : tensor.hyperedge(e)) prod *= x[v];
    total += prod;
  }
  return Factorial(k) * total;
}

Contraction Ttv(const MotifTensor& tensor, const Eigen::VectorXd& x, int p) {
  if (p == tensor.order()) return TtvScalar(tensor, x);
  if (p == tensor.order() - 1) return TtvSame(tensor, x);
  throw UnsupportedContraction("only p = k-1 and p = k contractions are supported, got p = " +
                               std::to_string(p));
}

Eigen::VectorXd TtvMulti(const MotifTensor& tensor,
                         std::span<const Eigen::VectorXd> xs) {
  if (xs.empty()) throw ContractViolation("TtvMulti needs at least one vector");
  if (static_cast<int>(xs.size()) != tensor.order() - 1) {
    throw ContractViolation("TtvMulti needs exactly k-1 vectors");
  }
  for (const auto& x : xs) CheckLength(tensor, x.size());
  if (tensor.order() - 1 > kMaxPermanent) {
    throw ContractViolation("motif order too large for TtvMulti");
  }
  return TtvMultiImpl(tensor, [&](int t, int v) { return xs[t][v]; });
}

Eigen::VectorXd TtvMultiColumns(const MotifTensor& tensor,
                                const Eigen::MatrixXd& factors,
                                std::span<const int> cols) {
  if (static_cast<int>(cols.size()) != tensor.order() - 1) {
    throw ContractViolation("TtvMultiColumns needs exactly k-1 columns");
  }
  CheckLength(tensor, factors.rows());
  for (int c : cols) {
    if (c < 0 || c >= factors.cols()) throw ContractViolation("column index out of range");
  }
  if (std::all_of(cols.begin(), cols.end(), [&](int c) { return c == cols[0]; })) {
    return TtvSame(tensor, factors.col(cols[0]));
  }
  if (tensor.order() - 1 > kMaxPermanent) {
    throw ContractViolation("motif order too large for TtvMulti");
  }
  return TtvMultiImpl(tensor,
                      [&](int t, int v) { return factors(v, cols[t]); });
}

std::vector<std::vector<std::size_t>> IncidenceLists(const MotifTensor& tensor) {
  std::vector<std::vector<std::size_t>> lists(tensor.dim());
  for (std::size_t e = 0; e < tensor.nnz(); ++e) {
    for (int v : tensor.hyperedge(e)) lists[v].push_back(e);
  }
  return lists;
}

}  // namespace kronalign
