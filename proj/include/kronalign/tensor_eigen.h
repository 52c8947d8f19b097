#ifndef KRONALIGN_TENSOR_EIGEN_H_
#define KRONALIGN_TENSOR_EIGEN_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kronalign/dense_tensor.h"
#include "kronalign/motif_tensor.h"

namespace kronalign {

// Z-eigenpair (lambda, x) with T x^{k-1} = lambda x and ||x|| = 1.
struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd vector;
  // ||T x^{k-1} - lambda x||_2.
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Type-erased symmetric tensor seen through x -> T x^{k-1}. Holds a shared
// copy of the tensor, so it is cheap to copy and safe to outlive its source.
class TensorOperator {
 public:
  explicit TensorOperator(SymmetricTensor tensor);
  explicit TensorOperator(MotifTensor tensor);

  int order() const { return order_; }
  int dim() const { return dim_; }
  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  // -T.
  TensorOperator Negated() const;

 private:
  TensorOperator() = default;

  int order_ = 0;
  int dim_ = 0;
  double sign_ = 1.0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_;
};

double EigenResidual(const TensorOperator& op, double lambda, const Eigen::VectorXd& x);

struct SshopmOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  // When set, convergence also requires the residual to be at most this.
  std::optional<double> residual_tol;
};

// Shifted symmetric higher-order power method:
//   x <- normalize(T x^{k-1} + shift x),  lambda = <x, T x^{k-1}>,
// stopping when |lambda_{l+1} - lambda_l| < tol. A run that hits max_iter is
// returned with converged = false. Throws DegenerateError if the update is 0.
EigenPair Sshopm(const TensorOperator& op, double shift, const Eigen::VectorXd& x0,
                 const SshopmOptions& options = {});

struct DominantOptions {
  int restarts = 100;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  // Iteration cap of each restart run; runs that hit it are discarded unless
  // nothing converged. The winner is polished with up to max_iter more.
  int restart_max_iter = 300;
  // Restart runs stop once |delta lambda| < max(tol, screen_tol * s), where s
  // is the magnitude used for the shift below.
  double screen_tol = 1e-8;
  int max_iter = 2000;
  // Every start runs on T and on -T with the shift
  //   beta = shift * max ||T x0^{k-1}||
  // (maximum over the first 64 start vectors).
  double shift = 1.5;
};

// Pair of largest |lambda| over multi-restart SS-HOPM. Ties within roundoff
// prefer the larger lambda, then the lexicographically larger vector. The
// winner is polished until its residual is at most 10 tol; `converged`
// reports whether that succeeded.
EigenPair DominantEigen(const TensorOperator& op, const DominantOptions& options = {});

// Distinct eigenvalues (merged within 1e-6) found from random starts, sorted
// by decreasing |lambda|, each with one representative vector. Besides
// SS-HOPM, which only reaches local extrema on the sphere, every start is
// also refined by Newton's method on the eigen-equations so saddle-type
// eigenpairs are found. Meant for small tensors (dim <= 8).
std::vector<EigenPair> SpectrumSample(const SymmetricTensor& tensor, int restarts,
                                      std::uint64_t seed, double tol = 1e-10);

// Dominant-pair comparison between A, B and B (x) A.
struct DecouplingReport {
  int m = 0;
  int n = 0;
  int order = 0;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double lambda_kron = 0.0;
  // |lambda_kron - lambda_a lambda_b|.
  double eig_gap = 0.0;
  // 1 - |<x_kron, v (x) u>|.
  double vec_gap = 0.0;
  double residual_a = 0.0;
  double residual_b = 0.0;
  double residual_kron = 0.0;
};

// Dominant pairs of A, B and the explicit product are computed
// independently. Throws BudgetExceeded if the product does not fit.
DecouplingReport VerifyDecoupling(const SymmetricTensor& a, const SymmetricTensor& b,
                                  const DominantOptions& options = {},
                                  std::size_t budget = kDefaultDenseBudget);

// Random trial grid: each trial draws m and n from `dims` and k from
// `orders`, then two standard-normal symmetric tensors.
struct DecouplingGrid {
  std::vector<int> dims = {2, 3, 4};
  std::vector<int> orders = {3, 4, 5};
};

DecouplingReport RunDecouplingTrial(const DecouplingGrid& grid, std::uint64_t trial_seed,
                                    const DominantOptions& options);

std::vector<DecouplingReport> RunDecouplingTrials(const DecouplingGrid& grid, int trials,
                                                  std::uint64_t seed,
                                                  const DominantOptions& options);

}  // namespace kronalign

#endif  // KRONALIGN_TENSOR_EIGEN_H_
