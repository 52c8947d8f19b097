#ifndef KRONALIGN_MOTIF_TENSOR_H_
#define KRONALIGN_MOTIF_TENSOR_H_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace kronalign {

// Sparse symmetric cubical tensor of order k and dimension n. Each nonzero
// orbit is stored once as a strictly increasing k-tuple of 0-based vertex
// ids (a hyperedge) with a positive weight; the k! symmetric entries are
// implied. Hyperedges are kept in lexicographic order, so membership tests
// are binary searches. Entries with a repeated index are always zero.
class MotifTensor {
 public:
  MotifTensor(int order, int dim);

  // Hyperedges must be strictly increasing, in range and unique. The input
  // order does not matter. Empty `weights` means all ones.
  MotifTensor(int order, int dim, std::vector<std::vector<int>> hyperedges,
              std::vector<double> weights = {});

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t nnz() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const int> hyperedge(std::size_t e) const {
    return {indices_.data() + e * static_cast<std::size_t>(order_),
            static_cast<std::size_t>(order_)};
  }
  double weight(std::size_t e) const { return weights_[e]; }

  // `sorted` must be strictly increasing.
  bool Contains(std::span<const int> sorted) const;

  // Logical entry T(i_1, ..., i_k) for indices in any order.
  double Entry(std::span<const int> index) const;

  std::vector<std::vector<int>> Hyperedges() const;
  const std::vector<double>& weights() const { return weights_; }

  friend bool operator==(const MotifTensor&, const MotifTensor&) = default;

 private:
  int order_;
  int dim_;
  std::vector<int> indices_;
  std::vector<double> weights_;
};

// T x^{k-1}: out(i) = sum over hyperedges e containing i of
// w(e) (k-1)! prod_{j in e, j != i} x(j).
Eigen::VectorXd TtvSame(const MotifTensor& tensor, const Eigen::VectorXd& x);

// T x^k = sum_e w(e) k! prod_{j in e} x(j).
double TtvScalar(const MotifTensor& tensor, const Eigen::VectorXd& x);

// T x^p for p in {k-1, k}. Throws UnsupportedContraction for other p.
using Contraction = std::variant<double, Eigen::VectorXd>;
Contraction Ttv(const MotifTensor& tensor, const Eigen::VectorXd& x, int p);

// T(x_1, ..., x_{k-1}) with distinct vectors. Each incident hyperedge
// contributes w(e) times the permanent of the (k-1)x(k-1) matrix
// [x_t(j)] over the other k-1 vertices j of e.
Eigen::VectorXd TtvMulti(const MotifTensor& tensor,
                         std::span<const Eigen::VectorXd> xs);

// Same as TtvMulti with xs = columns `cols` of `factors`.
Eigen::VectorXd TtvMultiColumns(const MotifTensor& tensor,
                                const Eigen::MatrixXd& factors,
                                std::span<const int> cols);

// Per-vertex list of incident hyperedge ids.
std::vector<std::vector<std::size_t>> IncidenceLists(const MotifTensor& tensor);

double Factorial(int n);

}  // namespace kronalign

#endif  // KRONALIGN_MOTIF_TENSOR_H_
