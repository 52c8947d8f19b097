#ifndef KRONALIGN_ALIGN_H_
#define KRONALIGN_ALIGN_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kronalign/kron_ops.h"
#include "kronalign/matching.h"
#include "kronalign/motif_tensor.h"

namespace kronalign {

struct AlignOptions {
  // Mixing parameter in (0, 1] and shift >= 0 of the affine update
  //   X <- alpha T(X) + alpha beta X + (1 - alpha) X_0.
  double alpha = 0.5;
  double beta = 1.0;
  int max_iter = 15;
  double tol = 1e-6;
  // Score every iterate with a max-weight matching. Unset means the method
  // default: on for Tame and LowRankTame, off for LambdaTame.
  std::optional<bool> match_every;
  // Singular values at most trunc_tol * sigma_1 are dropped.
  double trunc_tol = 1e-12;
  // LowRankTame switches to the accumulation form above this many columns.
  std::size_t column_cap = kDefaultColumnCap;
  int batch = 16;
  // Store every iterate densely in AlignmentOutput::iterates.
  bool keep_iterates = false;
};

// X = U V^T.
struct FactorPair {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;

  int rank() const { return static_cast<int>(u.cols()); }
  Eigen::MatrixXd Dense() const { return u * v.transpose(); }
  // ||U V^T||_F via trace((V^T V)(U^T U)).
  double FrobeniusNorm() const;
};

struct IterationRecord {
  int iteration = 0;
  double lambda = 0.0;
  int rank = 0;
  // Motifs aligned by the matching of this iterate, when it was scored.
  std::optional<std::size_t> motifs;
  double contraction_seconds = 0.0;
  double rank_reveal_seconds = 0.0;
  double matching_seconds = 0.0;
  // LowRankTame only: the accumulation form ran instead of the column form.
  bool accumulated = false;
  // With accumulated: the dense implicit contraction of U V^T was cheaper and
  // ran instead of the column-by-column accumulation.
  bool implicit_fallback = false;
  // LowRankTame only: sigma_2 / sigma_1 before truncation (0 for one column).
  double sigma_ratio = 0.0;
};

struct AlignmentOutput {
  std::string method;
  std::vector<IterationRecord> iterations;
  // Best iterate (highest motif score, earliest on ties) and its matching.
  int best_iteration = 0;
  std::size_t best_score = 0;
  Matching best_matching;
  Eigen::MatrixXd best_x;
  // Factors of the best iterate for the low-rank methods.
  std::optional<FactorPair> best_factors;
  bool converged = false;
  bool used_accumulation = false;
  std::vector<Eigen::MatrixXd> iterates;
};

// (1/(mn)) 1 1^T, as dense matrix or as factors.
Eigen::MatrixXd UniformWeights(int m, int n);
FactorPair UniformWeightFactors(int m, int n);

struct RankRevealResult {
  FactorPair factors;
  // All singular values of R_U R_V^T, before truncation.
  Eigen::VectorXd singular_values;
};

// Compresses U V^T to its numerical rank: QR of U and V, SVD of
// R_U R_V^T, keep sigma_i > trunc_tol sigma_1, return (Q_U U_hat,
// Q_V V_hat Sigma_hat). Throws DegenerateError when U V^T = 0.
RankRevealResult RankReveal(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                            double trunc_tol = 1e-12);

// Dense iteration with the implicit product contraction.
AlignmentOutput Tame(const MotifTensor& a, const MotifTensor& b, const AlignOptions& options,
                     std::optional<Eigen::MatrixXd> weights = std::nullopt);

// Same iterates as Tame, carried as rank-revealed factors. Throws
// InvariantViolation if a rank exceeds r^{k-1} + r + t (t = rank of W).
AlignmentOutput LowRankTame(const MotifTensor& a, const MotifTensor& b,
                            const AlignOptions& options,
                            std::optional<FactorPair> weights = std::nullopt);

// Independent power sequences of A and B collected as the columns of U and
// V (max_iter + 1 each); X = U V^T is matched at the end.
AlignmentOutput LambdaTame(const MotifTensor& a, const MotifTensor& b,
                           const AlignOptions& options);

// (1 - alpha) trace(W^T X) + (alpha / k!) (B (x) A) vec(X)^k.
double ObjectiveValue(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, const MotifTensor& a,
                      const MotifTensor& b, double alpha);

// Factors describing the best iterate for embedding-based refinement:
// rank-revealed best_factors when present, else a truncated SVD of best_x.
FactorPair EmbeddingFactors(const AlignmentOutput& output, double trunc_tol = 1e-12);

}  // namespace kronalign

#endif  // KRONALIGN_ALIGN_H_
