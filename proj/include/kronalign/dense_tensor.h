#ifndef KRONALIGN_DENSE_TENSOR_H_
#define KRONALIGN_DENSE_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "kronalign/motif_tensor.h"

namespace kronalign {

// Default cap on the number of stored entries of any dense tensor.
inline constexpr std::size_t kDefaultDenseBudget = std::size_t{1} << 24;

// Fully materialized cubical tensor. The linear index of (i_1, ..., i_k) is
// i_1 + n i_2 + ... + n^{k-1} i_k, so the first mode varies fastest. Only
// intended for desk-scale oracles.
class DenseTensor {
 public:
  DenseTensor(int order, int dim, std::size_t budget = kDefaultDenseBudget);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t linear) { return data_[linear]; }
  double operator[](std::size_t linear) const { return data_[linear]; }
  double& at(std::span<const int> index) { return data_[Linear(index)]; }
  double at(std::span<const int> index) const { return data_[Linear(index)]; }

  std::size_t Linear(std::span<const int> index) const;
  // Inverse of Linear.
  void Unravel(std::size_t linear, std::span<int> index) const;

  // Largest |T(i) - T(perm(i))| over all entries and adjacent transpositions.
  double SymmetryDefect() const;

  static DenseTensor FromMotif(const MotifTensor& tensor,
                               std::size_t budget = kDefaultDenseBudget);

 private:
  int order_;
  int dim_;
  std::vector<double> data_;
};

// Brute-force contractions over all n^k entries.
Eigen::VectorXd ContractDense(const DenseTensor& tensor, const Eigen::VectorXd& x);
double ContractDenseScalar(const DenseTensor& tensor, const Eigen::VectorXd& x);
// T(x_1, ..., x_{k-1}, :) contracting the leading k-1 modes.
Eigen::VectorXd ContractDenseMulti(const DenseTensor& tensor,
                                   std::span<const Eigen::VectorXd> xs);

// Dense symmetric tensor storing one value per multiset of indices
// (nondecreasing index tuples). Contractions peel one mode at a time: the
// order-l packed tensor contracted with x is the packed order-(l-1) tensor
// S'(s) = sum_j S(s + {j}) x(j), so T x^{k-1} costs about
// n C(n+k-2, k-1) multiply-adds instead of n^k. This is what the eigen
// solvers iterate on.
class SymmetricTensor {
 public:
  SymmetricTensor(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t unique_count() const { return values_.size(); }

  // Nondecreasing index tuple of unique entry u.
  std::span<const int> multiset(std::size_t u) const {
    return {plan_->tuples.back().data() + u * static_cast<std::size_t>(order_),
            static_cast<std::size_t>(order_)};
  }
  double value(std::size_t u) const { return values_[u]; }
  void set_value(std::size_t u, double v) { values_[u] = v; }
  // Index of a nondecreasing tuple.
  std::size_t IndexOf(std::span<const int> sorted) const;

  // T x^{k-1}.
  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  // T x^k.
  double ApplyScalar(const Eigen::VectorXd& x) const;
  // T x^{k-2} as a symmetric n x n matrix.
  Eigen::MatrixXd ApplyMatrix(const Eigen::VectorXd& x) const;

  SymmetricTensor Negated() const;
  DenseTensor ToDense(std::size_t budget = kDefaultDenseBudget) const;
  // Frobenius norm over all n^k entries.
  double FrobeniusNorm() const;

  // Reads the entry at each sorted multi-index; `dense` is assumed symmetric.
  static SymmetricTensor FromDense(const DenseTensor& dense);
  static SymmetricTensor FromMotif(const MotifTensor& tensor);
  // Ones on the superdiagonal T(i, ..., i).
  static SymmetricTensor Diagonal(int order, int dim);
  // Independent standard normal value for every unique entry.
  static SymmetricTensor Random(int order, int dim, std::mt19937_64& rng);

 private:
  // Shared by copies; depends only on (order, dim).
  struct Plan {
    // tuples[l-1]: all nondecreasing l-tuples, flattened, l = 1..k.
    std::vector<std::vector<int>> tuples;
    // child[l-2][u * n + j]: index in level l of tuple u of level l-1 with
    // j inserted, l = 2..k.
    std::vector<std::vector<std::uint32_t>> child;
    // Number of orderings of each order-k multiset.
    std::vector<double> multiplicity;
  };

  // Contracts levels k down to `stop`, returning the packed level-`stop`.
  std::vector<double> ContractTo(const Eigen::VectorXd& x, int stop) const;

  int order_;
  int dim_;
  std::shared_ptr<const Plan> plan_;
  std::vector<double> values_;
};

}  // namespace kronalign

#endif  // KRONALIGN_DENSE_TENSOR_H_
