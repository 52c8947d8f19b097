#include "kronalign/tensor_eigen.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/LU>

#include "kronalign/errors.h"
#include "kronalign/kron_ops.h"
#include "kronalign/util.h"

namespace kronalign {

TensorOperator::TensorOperator(SymmetricTensor tensor)
    : order_(tensor.order()), dim_(tensor.dim()) {
  auto shared = std::make_shared<const SymmetricTensor>(std::move(tensor));
  apply_ = [shared](const Eigen::VectorXd& x) { return shared->Apply(x); };
}

TensorOperator::TensorOperator(MotifTensor tensor)
    : order_(tensor.order()), dim_(tensor.dim()) {
  auto shared = std::make_shared<const MotifTensor>(std::move(tensor));
  apply_ = [shared](const Eigen::VectorXd& x) { return TtvSame(*shared, x); };
}

Eigen::VectorXd TensorOperator::Apply(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw ContractViolation("vector length mismatch");
  if (sign_ < 0) return -apply_(x);
  return apply_(x);
}

TensorOperator TensorOperator::Negated() const {
  TensorOperator copy = *this;
  copy.sign_ = -sign_;
  return copy;
}

double EigenResidual(const TensorOperator& op, double lambda, const Eigen::VectorXd& x) {
  return (op.Apply(x) - lambda * x).norm();
}

EigenPair Sshopm(const TensorOperator& op, double shift, const Eigen::VectorXd& x0,
                 const SshopmOptions& options) {
  if (x0.size() != op.dim()) throw ContractViolation("start vector length mismatch");
  const double norm0 = x0.norm();
  if (!(norm0 > 0.0)) throw ContractViolation("start vector must be nonzero");
  EigenPair pair;
  pair.vector = x0 / norm0;
  Eigen::VectorXd g = op.Apply(pair.vector);
  pair.lambda = pair.vector.dot(g);
  for (int it = 1; it <= options.max_iter; ++it) {
    Eigen::VectorXd y = g + shift * pair.vector;
    const double ny = y.norm();
    if (!std::isfinite(ny)) throw NumericalFailure("SS-HOPM iterate is not finite");
    if (ny == 0.0) {
      throw DegenerateError("SS-HOPM update vanished at iteration " + std::to_string(it));
    }
    pair.vector = y / ny;
    g = op.Apply(pair.vector);
    const double lambda = pair.vector.dot(g);
    const double change = std::abs(lambda - pair.lambda);
    pair.lambda = lambda;
    pair.iterations = it;
    if (change < options.tol) {
      pair.residual = (g - lambda * pair.vector).norm();
      if (!options.residual_tol || pair.residual <= *options.residual_tol) {
        pair.converged = true;
        return pair;
      }
    }
  }
  pair.residual = (g - pair.lambda * pair.vector).norm();
  return pair;
}

namespace {

bool LexGreater(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

// Strict preference used to reduce restarts.
bool Better(const EigenPair& a, const EigenPair& b) {
  if (a.converged != b.converged) return a.converged;
  const double tie = 1e-9 * std::max({1.0, std::abs(a.lambda), std::abs(b.lambda)});
  const double aa = std::abs(a.lambda);
  const double ab = std::abs(b.lambda);
  if (aa > ab + tie) return true;
  if (ab > aa + tie) return false;
  if (a.lambda > b.lambda + tie) return true;
  if (b.lambda > a.lambda + tie) return false;
  return LexGreater(a.vector, b.vector);
}

struct Candidate {
  EigenPair pair;  // in terms of T
  double sign = 1.0;
  bool valid = false;
};

// Largest ||T x^{k-1}|| over (up to 64 of) the start vectors; 1 for T = 0.
double ShiftScale(const TensorOperator& op, std::span<const Eigen::VectorXd> starts) {
  double scale = 0.0;
  const std::size_t probes = std::min<std::size_t>(starts.size(), 64);
  for (std::size_t r = 0; r < probes; ++r) scale = std::max(scale, op.Apply(starts[r]).norm());
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

EigenPair DominantEigen(const TensorOperator& op, const DominantOptions& options) {
  if (options.restarts < 1) throw ContractViolation("restarts must be at least 1");
  std::mt19937_64 rng(options.seed);
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(options.restarts);
  for (int r = 0; r < options.restarts; ++r) starts.push_back(RandomUnitVector(op.dim(), rng));

  const double scale = ShiftScale(op, starts);
  const double shift = options.shift * scale;
  const TensorOperator negated = op.Negated();
  const SshopmOptions run_options{std::max(options.tol, options.screen_tol * scale),
                                  options.restart_max_iter, std::nullopt};

  std::vector<Candidate> per_start(starts.size());
  ParallelFor(starts.size(), [&](std::size_t r) {
    Candidate best;
    for (double run_sign : {1.0, -1.0}) {
      double sign = run_sign;
      EigenPair pair;
      try {
        pair = Sshopm(sign > 0 ? op : negated, shift, starts[r], run_options);
      } catch (const DegenerateError&) {
        continue;
      }
      pair.lambda *= sign;
      // Odd order: (-lambda, -x) is also an eigenpair, so keep lambda >= 0.
      if (op.order() % 2 == 1 && pair.lambda < 0.0) {
        pair.lambda = -pair.lambda;
        pair.vector = -pair.vector;
        sign = -sign;
      }
      if (!best.valid || Better(pair, best.pair)) best = Candidate{std::move(pair), sign, true};
    }
    per_start[r] = std::move(best);
  });

  Candidate best;
  for (auto& c : per_start) {
    if (c.valid && (!best.valid || Better(c.pair, best.pair))) best = std::move(c);
  }
  if (!best.valid) throw DegenerateError("every SS-HOPM run degenerated");

  const SshopmOptions polish{options.tol, options.max_iter, 10.0 * options.tol};
  EigenPair result = best.pair;
  try {
    EigenPair polished =
        Sshopm(best.sign > 0 ? op : negated, shift, best.pair.vector, polish);
    polished.lambda *= best.sign;
    polished.iterations += best.pair.iterations;
    if (polished.converged || polished.residual <= result.residual) result = polished;
  } catch (const DegenerateError&) {
  }
  result.residual = EigenResidual(op, result.lambda, result.vector);
  result.converged = result.residual <= 10.0 * options.tol;
  return result;
}

namespace {

// Newton's method on F(x, lambda) = [T x^{k-1} - lambda x; (1 - x'x)/2].
std::optional<EigenPair> NewtonEigen(const SymmetricTensor& tensor, Eigen::VectorXd x,
                                     double tol, int max_iter = 80) {
  const int n = tensor.dim();
  const int k = tensor.order();
  double lambda = x.dot(tensor.Apply(x));
  Eigen::MatrixXd jac(n + 1, n + 1);
  Eigen::VectorXd rhs(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd g = tensor.Apply(x);
    const Eigen::VectorXd top = g - lambda * x;
    const double bottom = 0.5 * (1.0 - x.squaredNorm());
    if (!top.allFinite() || !std::isfinite(bottom)) return std::nullopt;
    if (top.norm() <= tol && std::abs(bottom) <= 1e-14) break;
    jac.topLeftCorner(n, n) = (k - 1) * tensor.ApplyMatrix(x);
    jac.topLeftCorner(n, n).diagonal().array() -= lambda;
    jac.topRightCorner(n, 1) = -x;
    jac.bottomLeftCorner(1, n) = -x.transpose();
    jac(n, n) = 0.0;
    rhs.head(n) = -top;
    rhs[n] = -bottom;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd step = lu.solve(rhs);
    if (!step.allFinite()) return std::nullopt;
    x += step.head(n);
    lambda += step[n];
  }
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
  EigenPair pair;
  pair.vector = x / norm;
  const Eigen::VectorXd g = tensor.Apply(pair.vector);
  pair.lambda = pair.vector.dot(g);
  pair.residual = (g - pair.lambda * pair.vector).norm();
  pair.converged = pair.residual <= tol;
  if (!pair.converged) return std::nullopt;
  return pair;
}

}  // namespace

std::vector<EigenPair> SpectrumSample(const SymmetricTensor& tensor, int restarts,
                                      std::uint64_t seed, double tol) {
  constexpr double kMergeTol = 1e-6;
  const TensorOperator op(tensor);
  std::mt19937_64 rng(seed);
  SshopmOptions run_options{tol, 2000, std::nullopt};
  const double accept = std::max(tol, 1e-12) * 100.0;
  std::vector<EigenPair> found;
  auto consider = [&](const Eigen::VectorXd& start) {
    if (auto pair = NewtonEigen(tensor, start, tol)) {
      found.push_back(std::move(*pair));
    } else if (auto loose = NewtonEigen(tensor, start, accept)) {
      found.push_back(std::move(*loose));
    }
  };
  std::vector<Eigen::VectorXd> starts;
  for (int r = 0; r < restarts; ++r) starts.push_back(RandomUnitVector(tensor.dim(), rng));
  const double shift = 1.5 * ShiftScale(op, starts);
  const TensorOperator negated = op.Negated();
  for (const auto& start : starts) {
    consider(start);
    for (double sign : {1.0, -1.0}) {
      EigenPair pair;
      try {
        pair = Sshopm(sign > 0 ? op : negated, shift, start, run_options);
      } catch (const DegenerateError&) {
        continue;
      }
      if (!pair.converged) continue;
      pair.lambda *= sign;
      if (pair.residual <= accept) {
        found.push_back(pair);
      } else {
        consider(pair.vector);
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
  // Group consecutive values within the merge tolerance of the group's first
  // member and keep the member with the smallest residual.
  std::vector<EigenPair> distinct;
  double group_start = 0.0;
  for (auto& pair : found) {
    if (!distinct.empty() && pair.lambda - group_start <= kMergeTol) {
      if (pair.residual < distinct.back().residual) distinct.back() = std::move(pair);
      continue;
    }
    group_start = pair.lambda;
    distinct.push_back(std::move(pair));
  }
  std::stable_sort(distinct.begin(), distinct.end(), [](const EigenPair& a, const EigenPair& b) {
    if (std::abs(a.lambda) != std::abs(b.lambda)) return std::abs(a.lambda) > std::abs(b.lambda);
    return a.lambda > b.lambda;
  });
  return distinct;
}

DecouplingReport VerifyDecoupling(const SymmetricTensor& a, const SymmetricTensor& b,
                                  const DominantOptions& options, std::size_t budget) {
  if (a.order() != b.order()) throw ContractViolation("operand orders differ");
  const SymmetricTensor kron =
      SymmetricTensor::FromDense(ExplicitKron(a.ToDense(budget), b.ToDense(budget), budget));
  DominantOptions opt_a = options;
  DominantOptions opt_b = options;
  DominantOptions opt_kron = options;
  opt_a.seed = DeriveSeed(options.seed, 0);
  opt_b.seed = DeriveSeed(options.seed, 1);
  opt_kron.seed = DeriveSeed(options.seed, 2);
  const EigenPair pa = DominantEigen(TensorOperator(a), opt_a);
  const EigenPair pb = DominantEigen(TensorOperator(b), opt_b);
  const EigenPair pk = DominantEigen(TensorOperator(kron), opt_kron);

  DecouplingReport report;
  report.m = a.dim();
  report.n = b.dim();
  report.order = a.order();
  report.lambda_a = pa.lambda;
  report.lambda_b = pb.lambda;
  report.lambda_kron = pk.lambda;
  report.eig_gap = std::abs(pk.lambda - pa.lambda * pb.lambda);
  const Eigen::MatrixXd outer = pa.vector * pb.vector.transpose();
  report.vec_gap = std::max(0.0, 1.0 - std::abs(pk.vector.dot(Vec(outer))));
  report.residual_a = pa.residual;
  report.residual_b = pb.residual;
  report.residual_kron = pk.residual;
  return report;
}

DecouplingReport RunDecouplingTrial(const DecouplingGrid& grid, std::uint64_t trial_seed,
                                    const DominantOptions& options) {
  if (grid.dims.empty() || grid.orders.empty()) {
    throw ContractViolation("decoupling grid needs at least one dim and one order");
  }
  std::mt19937_64 rng(trial_seed);
  auto pick = [&](const std::vector<int>& values) {
    std::uniform_int_distribution<std::size_t> index(0, values.size() - 1);
    return values[index(rng)];
  };
  const int m = pick(grid.dims);
  const int n = pick(grid.dims);
  const int k = pick(grid.orders);
  const SymmetricTensor a = SymmetricTensor::Random(k, m, rng);
  const SymmetricTensor b = SymmetricTensor::Random(k, n, rng);
  DominantOptions trial_options = options;
  trial_options.seed = DeriveSeed(trial_seed, 7);
  return VerifyDecoupling(a, b, trial_options);
}

std::vector<DecouplingReport> RunDecouplingTrials(const DecouplingGrid& grid, int trials,
                                                  std::uint64_t seed,
                                                  const DominantOptions& options) {
  if (trials < 0) throw ContractViolation("trial count must be nonnegative");
  std::vector<DecouplingReport> reports(static_cast<std::size_t>(trials));
  ParallelFor(reports.size(), [&](std::size_t t) {
    reports[t] = RunDecouplingTrial(grid, DeriveSeed(seed, t), options);
  });
  return reports;
}

}  // namespace kronalign
