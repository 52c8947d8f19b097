#include "kronalign/align.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "kronalign/errors.h"

namespace kronalign {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void Validate(const MotifTensor& a, const MotifTensor& b, const AlignOptions& options) {
  if (a.order() != b.order()) throw ContractViolation("motif tensors have different orders");
  if (a.empty() || b.empty()) {
    throw DegenerateError("cannot align with an empty motif tensor");
  }
  if (!(options.alpha > 0.0 && options.alpha <= 1.0)) {
    throw ContractViolation("alpha must lie in (0, 1]");
  }
  if (!(options.beta >= 0.0)) throw ContractViolation("beta must be nonnegative");
  if (options.max_iter < 0) throw ContractViolation("max_iter must be nonnegative");
  if (options.batch < 1) throw ContractViolation("batch must be positive");
}

double CheckedNorm(double norm, const std::string& what, int iteration) {
  if (!std::isfinite(norm)) {
    throw NumericalFailure(what + " is not finite at iteration " + std::to_string(iteration));
  }
  if (norm == 0.0) {
    throw DegenerateError(what + " vanished at iteration " + std::to_string(iteration));
  }
  return norm;
}

// Tracks the best scored iterate; earlier iterates win ties.
class Scorer {
 public:
  Scorer(const MotifTensor& a, const MotifTensor& b, AlignmentOutput& out)
      : a_(a), b_(b), out_(out) {}

  void Score(const Eigen::MatrixXd& x, int iteration, IterationRecord& record,
             const std::optional<FactorPair>& factors) {
    const auto start = Clock::now();
    Matching matching = MaxWeightMatching(x);
    const std::size_t motifs = MotifsAligned(matching, a_, b_);
    record.matching_seconds += Seconds(start);
    record.motifs = motifs;
    if (!scored_ || motifs > out_.best_score) {
      scored_ = true;
      out_.best_iteration = iteration;
      out_.best_score = motifs;
      out_.best_matching = std::move(matching);
      out_.best_x = x;
      out_.best_factors = factors;
    }
  }

 private:
  const MotifTensor& a_;
  const MotifTensor& b_;
  AlignmentOutput& out_;
  bool scored_ = false;
};

// [c_0 M_0, c_1 M_1, ...] skipping blocks with a zero coefficient.
Eigen::MatrixXd Concat(std::initializer_list<std::pair<double, const Eigen::MatrixXd*>> blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& [c, m] : blocks) {
    rows = m->rows();
    if (c != 0.0) cols += m->cols();
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& [c, m] : blocks) {
    if (c == 0.0) continue;
    out.middleCols(at, m->cols()) = c * *m;
    at += m->cols();
  }
  return out;
}

}  // namespace

double FactorPair::FrobeniusNorm() const {
  const Eigen::MatrixXd gu = u.transpose() * u;
  const Eigen::MatrixXd gv = v.transpose() * v;
  return std::sqrt(std::max(0.0, (gv.cwiseProduct(gu)).sum()));
}

Eigen::MatrixXd UniformWeights(int m, int n) {
  return Eigen::MatrixXd::Constant(m, n, 1.0 / (static_cast<double>(m) * n));
}

FactorPair UniformWeightFactors(int m, int n) {
  return {Eigen::MatrixXd::Constant(m, 1, 1.0 / m), Eigen::MatrixXd::Constant(n, 1, 1.0 / n)};
}

RankRevealResult RankReveal(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                            double trunc_tol) {
  if (u.cols() != v.cols()) throw ContractViolation("factor column counts differ");
  if (u.cols() < 1) throw ContractViolation("rank reveal needs at least one column");
  const Eigen::Index ku = std::min(u.rows(), u.cols());
  const Eigen::Index kv = std::min(v.rows(), v.cols());
  const Eigen::HouseholderQR<Eigen::MatrixXd> qru(u);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qrv(v);
  const Eigen::MatrixXd qu = qru.householderQ() * Eigen::MatrixXd::Identity(u.rows(), ku);
  const Eigen::MatrixXd qv = qrv.householderQ() * Eigen::MatrixXd::Identity(v.rows(), kv);
  const Eigen::MatrixXd ru = qru.matrixQR().topRows(ku).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rv = qrv.matrixQR().topRows(kv).triangularView<Eigen::Upper>();
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(ru * rv.transpose(),
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (!sigma.allFinite()) throw NumericalFailure("rank reveal produced non-finite values");
  if (sigma.size() == 0 || sigma[0] == 0.0) {
    throw DegenerateError("rank reveal of a zero matrix");
  }
  Eigen::Index keep = 0;
  while (keep < sigma.size() && sigma[keep] > trunc_tol * sigma[0]) ++keep;
  RankRevealResult result;
  result.factors.u = qu * svd.matrixU().leftCols(keep);
  result.factors.v = qv * (svd.matrixV().leftCols(keep) * sigma.head(keep).asDiagonal());
  result.singular_values = sigma;
  return result;
}

AlignmentOutput Tame(const MotifTensor& a, const MotifTensor& b, const AlignOptions& options,
                     std::optional<Eigen::MatrixXd> weights) {
  Validate(a, b, options);
  const int m = a.dim();
  const int n = b.dim();
  const Eigen::MatrixXd w = weights ? *weights : UniformWeights(m, n);
  if (w.rows() != m || w.cols() != n) throw ContractViolation("weight matrix shape mismatch");
  const KronPairView pair(a, b);
  const Eigen::MatrixXd x0 = w / CheckedNorm(w.norm(), "weight matrix", 0);
  const bool match_every = options.match_every.value_or(true);
  const double alpha = options.alpha;
  const double beta = options.beta;

  AlignmentOutput out;
  out.method = "tame";
  Scorer scorer(a, b, out);
  Eigen::MatrixXd x = x0;
  double lambda_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iter; ++it) {
    IterationRecord record;
    record.iteration = it;
    const auto start = Clock::now();
    const Eigen::MatrixXd xhat = ImplicitKronTtv(pair, x);
    record.contraction_seconds = Seconds(start);
    record.lambda = x.cwiseProduct(xhat).sum();
    Eigen::MatrixXd next = alpha * xhat + alpha * beta * x + (1.0 - alpha) * x0;
    next /= CheckedNorm(next.norm(), "iterate", it);
    x = std::move(next);
    record.rank = -1;
    if (match_every) scorer.Score(x, it, record, std::nullopt);
    if (options.keep_iterates) out.iterates.push_back(x);
    out.iterations.push_back(record);
    if (std::abs(record.lambda - lambda_prev) < options.tol) {
      out.converged = true;
      break;
    }
    lambda_prev = record.lambda;
  }
  if (!match_every || out.iterations.empty()) {
    IterationRecord scratch;
    scorer.Score(x, static_cast<int>(out.iterations.size()),
                 out.iterations.empty() ? scratch : out.iterations.back(), std::nullopt);
  }
  return out;
}

AlignmentOutput LowRankTame(const MotifTensor& a, const MotifTensor& b,
                            const AlignOptions& options, std::optional<FactorPair> weights) {
  Validate(a, b, options);
  const int m = a.dim();
  const int n = b.dim();
  const int k = a.order();
  FactorPair w = weights ? *weights : UniformWeightFactors(m, n);
  if (w.u.rows() != m || w.v.rows() != n || w.u.cols() != w.v.cols() || w.u.cols() < 1) {
    throw ContractViolation("weight factor shapes mismatch");
  }
  const KronPairView pair(a, b);
  const bool match_every = options.match_every.value_or(true);
  const double alpha = options.alpha;
  const double beta = options.beta;
  const int t = w.rank();

  // Only V is scaled, so X_0 = U_0 V_0^T has unit norm.
  const Eigen::MatrixXd u0 = w.u;
  const Eigen::MatrixXd v0 = w.v / CheckedNorm(w.FrobeniusNorm(), "weight matrix", 0);
  Eigen::MatrixXd u = u0;
  Eigen::MatrixXd v = v0;

  AlignmentOutput out;
  out.method = "lowrank-tame";
  Scorer scorer(a, b, out);
  double lambda_prev = std::numeric_limits<double>::infinity();
  const double ca = std::sqrt(alpha);
  const double cb = std::sqrt(alpha * beta);
  const double c0 = std::sqrt(1.0 - alpha);
  for (int it = 1; it <= options.max_iter; ++it) {
    IterationRecord record;
    record.iteration = it;
    const int r = static_cast<int>(u.cols());
    const std::size_t columns = ExpandedColumnCount(r, k);
    RankRevealResult revealed;
    if (columns <= options.column_cap) {
      auto start = Clock::now();
      const auto [uh, vh] = LowrankKronTtv(pair, u, v, options.column_cap);
      record.contraction_seconds = Seconds(start);
      record.lambda = ((vh.transpose() * v).cwiseProduct((uh.transpose() * u))).sum();
      const Eigen::MatrixXd un = Concat({{ca, &uh}, {cb, &u}, {c0, &u0}});
      const Eigen::MatrixXd vn = Concat({{ca, &vh}, {cb, &v}, {c0, &v0}});
      start = Clock::now();
      revealed = RankReveal(un, vn, options.trunc_tol);
      record.rank_reveal_seconds = Seconds(start);
    } else {
      record.accumulated = true;
      out.used_accumulation = true;
      // The dense contraction of U V^T gives the same matrix; take it when its
      // hyperedge-pair loop is shorter than the column accumulation.
      const double accumulate_cost =
          static_cast<double>(columns) * static_cast<double>(a.nnz() + b.nnz());
      const double implicit_cost = static_cast<double>(a.nnz()) * static_cast<double>(b.nnz()) * k;
      record.implicit_fallback = implicit_cost < accumulate_cost;
      auto start = Clock::now();
      const Eigen::MatrixXd xhat = record.implicit_fallback
                                       ? ImplicitKronTtv(pair, u * v.transpose())
                                       : AccumulatedKronTtv(pair, u, v, options.batch);
      record.contraction_seconds = Seconds(start);
      record.lambda = (u.transpose() * xhat * v).trace();
      const Eigen::MatrixXd dense = alpha * xhat + alpha * beta * (u * v.transpose()) +
                                    (1.0 - alpha) * (u0 * v0.transpose());
      start = Clock::now();
      revealed = RankReveal(dense, Eigen::MatrixXd::Identity(n, n), options.trunc_tol);
      record.rank_reveal_seconds = Seconds(start);
    }
    const auto& sigma = revealed.singular_values;
    record.sigma_ratio = sigma.size() > 1 ? sigma[1] / sigma[0] : 0.0;
    u = std::move(revealed.factors.u);
    v = std::move(revealed.factors.v);
    const std::size_t bound = columns + static_cast<std::size_t>(r) + t;
    if (static_cast<std::size_t>(u.cols()) > bound) {
      throw InvariantViolation("rank " + std::to_string(u.cols()) + " exceeds bound " +
                               std::to_string(bound) + " at iteration " + std::to_string(it));
    }
    // U has orthonormal columns, so ||X||_F = ||V||_F.
    v /= CheckedNorm(FactorPair{u, v}.FrobeniusNorm(), "iterate", it);
    record.rank = static_cast<int>(u.cols());
    const bool need_dense = match_every || options.keep_iterates;
    if (need_dense) {
      const Eigen::MatrixXd x = u * v.transpose();
      if (match_every) scorer.Score(x, it, record, FactorPair{u, v});
      if (options.keep_iterates) out.iterates.push_back(x);
    }
    out.iterations.push_back(record);
    if (std::abs(record.lambda - lambda_prev) < options.tol) {
      out.converged = true;
      break;
    }
    lambda_prev = record.lambda;
  }
  if (!match_every || out.iterations.empty()) {
    IterationRecord scratch;
    scorer.Score(u * v.transpose(), static_cast<int>(out.iterations.size()),
                 out.iterations.empty() ? scratch : out.iterations.back(), FactorPair{u, v});
  }
  return out;
}

AlignmentOutput LambdaTame(const MotifTensor& a, const MotifTensor& b,
                           const AlignOptions& options) {
  Validate(a, b, options);
  const int m = a.dim();
  const int n = b.dim();
  const int steps = options.max_iter;
  const bool match_every = options.match_every.value_or(false);
  const double alpha = options.alpha;
  const double beta = options.beta;

  Eigen::MatrixXd u(m, steps + 1);
  Eigen::MatrixXd v(n, steps + 1);
  u.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(m)));
  v.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));

  AlignmentOutput out;
  out.method = "lambda-tame";
  Scorer scorer(a, b, out);
  for (int l = 1; l <= steps; ++l) {
    IterationRecord record;
    record.iteration = l;
    const auto start = Clock::now();
    const Eigen::VectorXd gu = TtvSame(a, u.col(l - 1));
    const Eigen::VectorXd gv = TtvSame(b, v.col(l - 1));
    record.contraction_seconds = Seconds(start);
    record.lambda = u.col(l - 1).dot(gu) * v.col(l - 1).dot(gv);
    Eigen::VectorXd cu = alpha * gu + alpha * beta * u.col(l - 1) + (1.0 - alpha) * u.col(0);
    Eigen::VectorXd cv = alpha * gv + alpha * beta * v.col(l - 1) + (1.0 - alpha) * v.col(0);
    u.col(l) = cu / CheckedNorm(cu.norm(), "column of U", l);
    v.col(l) = cv / CheckedNorm(cv.norm(), "column of V", l);
    record.rank = l + 1;
    if (match_every || options.keep_iterates) {
      FactorPair partial{u.leftCols(l + 1), v.leftCols(l + 1)};
      const Eigen::MatrixXd x = partial.Dense();
      if (match_every) scorer.Score(x, l, record, partial);
      if (options.keep_iterates) out.iterates.push_back(x);
    }
    out.iterations.push_back(record);
  }
  out.converged = true;
  if (!match_every || out.iterations.empty()) {
    FactorPair all{u, v};
    IterationRecord scratch;
    scorer.Score(all.Dense(), steps, out.iterations.empty() ? scratch : out.iterations.back(),
                 all);
  }
  return out;
}

double ObjectiveValue(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, const MotifTensor& a,
                      const MotifTensor& b, double alpha) {
  if (x.rows() != a.dim() || x.cols() != b.dim() || w.rows() != x.rows() ||
      w.cols() != x.cols()) {
    throw ContractViolation("objective shapes mismatch");
  }
  const KronPairView pair(a, b);
  const double motif_term = x.cwiseProduct(ImplicitKronTtv(pair, x)).sum();
  return (1.0 - alpha) * w.cwiseProduct(x).sum() + alpha / Factorial(a.order()) * motif_term;
}

FactorPair EmbeddingFactors(const AlignmentOutput& output, double trunc_tol) {
  if (output.best_factors) {
    return RankReveal(output.best_factors->u, output.best_factors->v, trunc_tol).factors;
  }
  const Eigen::Index n = output.best_x.cols();
  return RankReveal(output.best_x, Eigen::MatrixXd::Identity(n, n), trunc_tol).factors;
}

}  // namespace kronalign
