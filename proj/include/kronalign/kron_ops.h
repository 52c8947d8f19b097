#ifndef KRONALIGN_KRON_OPS_H_
#define KRONALIGN_KRON_OPS_H_

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kronalign/dense_tensor.h"
#include "kronalign/motif_tensor.h"

namespace kronalign {

// Default limit on r^{k-1} columns produced by LowrankKronTtv.
inline constexpr std::size_t kDefaultColumnCap = 10000;

// Non-owning view of the product B (x) A of two motif tensors with the same
// order. A has dimension m and B has dimension n; matrices X acting on the
// product are m x n and vec(X) stacks columns, so vec(X)[i + m i'] = X(i, i').
class KronPairView {
 public:
  KronPairView(const MotifTensor& a, const MotifTensor& b);

  const MotifTensor& a() const { return *a_; }
  const MotifTensor& b() const { return *b_; }
  int order() const { return a_->order(); }
  int m() const { return a_->dim(); }
  int n() const { return b_->dim(); }

 private:
  const MotifTensor* a_;
  const MotifTensor* b_;
};

// 0-based interleaved index <i, i'> = i + m i'.
inline std::size_t Interleave(int i, int i_prime, int m) {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(m) * i_prime;
}

Eigen::VectorXd Vec(const Eigen::MatrixXd& x);
Eigen::MatrixXd Unvec(const Eigen::VectorXd& v, int m, int n);

// unvec((B (x) A) vec(X)^{k-1}) by looping over every pair of hyperedges.
// Costs O(nnz(A) nnz(B) k^2 perm(k-1)) and never forms the product.
Eigen::MatrixXd ImplicitKronTtv(const KronPairView& pair, const Eigen::MatrixXd& x);

// Decoupled rank-1 contraction: (A u^{k-1}, B v^{k-1}). The outer product of
// the two results equals ImplicitKronTtv(pair, u v^T).
std::pair<Eigen::VectorXd, Eigen::VectorXd> Rank1KronTtv(const KronPairView& pair,
                                                        const Eigen::VectorXd& u,
                                                        const Eigen::VectorXd& v);
// p = k form: (A u^k, B v^k), whose product is (B (x) A) vec(u v^T)^k.
std::pair<double, double> Rank1KronScalar(const KronPairView& pair,
                                          const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& v);

// Index tuples of [r]^{k-1} in lexicographic order.
std::vector<std::vector<int>> ColumnTuples(int rank, int order,
                                           std::size_t column_cap = kDefaultColumnCap);

// Number of columns r^{k-1}, saturating at SIZE_MAX.
std::size_t ExpandedColumnCount(int rank, int order);

// Rank-r contraction. For every tuple i in [r]^{k-1} (lexicographic), column
// i of the first result is A(U(:,i_1), ..., U(:,i_{k-1})) and of the second is
// the same for B and V, so first * second^T = unvec((B (x) A) vec(U V^T)^{k-1}).
// Throws BudgetExceeded when r^{k-1} > column_cap.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> LowrankKronTtv(
    const KronPairView& pair, const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
    std::size_t column_cap = kDefaultColumnCap);

// Accumulation form of LowrankKronTtv: forms the dense m x n result, adding
// `batch` column outer products at a time instead of storing all r^{k-1}
// columns.
Eigen::MatrixXd AccumulatedKronTtv(const KronPairView& pair, const Eigen::MatrixXd& u,
                                   const Eigen::MatrixXd& v, int batch = 16);

// Materialized B (x) A with entry <i, i'> = A(i) B(i') per mode. Dense
// variants accept arbitrary (e.g. random) symmetric operands.
DenseTensor ExplicitKron(const KronPairView& pair,
                         std::size_t budget = kDefaultDenseBudget);
DenseTensor ExplicitKron(const DenseTensor& a, const DenseTensor& b,
                         std::size_t budget = kDefaultDenseBudget);

}  // namespace kronalign

#endif  // KRONALIGN_KRON_OPS_H_
