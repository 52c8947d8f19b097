#include "kronalign/dense_tensor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "kronalign/errors.h"

namespace kronalign {

namespace {

std::size_t CheckedPower(int base, int exponent, std::size_t budget) {
  std::size_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (total > budget / static_cast<std::size_t>(base)) {
      throw BudgetExceeded("dense tensor with " + std::to_string(base) + "^" +
                           std::to_string(exponent) +
                           " entries exceeds the oracle budget");
    }
    total *= static_cast<std::size_t>(base);
  }
  return total;
}

// Number of distinct orderings of a multiset given its sorted entries.
double OrderingCount(std::span<const int> sorted) {
  double count = Factorial(static_cast<int>(sorted.size()));
  std::size_t run = 1;
  for (std::size_t j = 1; j <= sorted.size(); ++j) {
    if (j < sorted.size() && sorted[j] == sorted[j - 1]) {
      ++run;
    } else {
      count /= Factorial(static_cast<int>(run));
      run = 1;
    }
  }
  return count;
}

}  // namespace

DenseTensor::DenseTensor(int order, int dim, std::size_t budget)
    : order_(order), dim_(dim) {
  if (order < 1 || dim < 1) {
    throw ContractViolation("dense tensor needs positive order and dimension");
  }
  data_.assign(CheckedPower(dim, order, budget), 0.0);
}

std::size_t DenseTensor::Linear(std::span<const int> index) const {
  std::size_t linear = 0;
  for (int j = order_ - 1; j >= 0; --j) {
    linear = linear * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(index[j]);
  }
  return linear;
}

void DenseTensor::Unravel(std::size_t linear, std::span<int> index) const {
  for (int j = 0; j < order_; ++j) {
    index[j] = static_cast<int>(linear % static_cast<std::size_t>(dim_));
    linear /= static_cast<std::size_t>(dim_);
  }
}

double DenseTensor::SymmetryDefect() const {
  std::vector<int> index(order_);
  double defect = 0.0;
  for (std::size_t lin = 0; lin < data_.size(); ++lin) {
    Unravel(lin, index);
    for (int j = 0; j + 1 < order_; ++j) {
      std::swap(index[j], index[j + 1]);
      defect = std::max(defect, std::abs(data_[lin] - at(index)));
      std::swap(index[j], index[j + 1]);
    }
  }
  return defect;
}

DenseTensor DenseTensor::FromMotif(const MotifTensor& tensor, std::size_t budget) {
  DenseTensor dense(tensor.order(), tensor.dim(), budget);
  std::vector<int> index;
  for (std::size_t e = 0; e < tensor.nnz(); ++e) {
    const auto edge = tensor.hyperedge(e);
    index.assign(edge.begin(), edge.end());
    do {
      dense.at(index) = tensor.weight(e);
    } while (std::next_permutation(index.begin(), index.end()));
  }
  return dense;
}

Eigen::VectorXd ContractDense(const DenseTensor& tensor, const Eigen::VectorXd& x) {
  if (x.size() != tensor.dim()) throw ContractViolation("vector length mismatch");
  const int k = tensor.order();
  std::vector<int> index(k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(tensor.dim());
  for (std::size_t lin = 0; lin < tensor.size(); ++lin) {
    const double t = tensor[lin];
    if (t == 0.0) continue;
    tensor.Unravel(lin, index);
    double prod = t;
    for (int j = 1; j < k; ++j) prod *= x[index[j]];
    out[index[0]] += prod;
  }
  return out;
}

double ContractDenseScalar(const DenseTensor& tensor, const Eigen::VectorXd& x) {
  return x.dot(ContractDense(tensor, x));
}

Eigen::VectorXd ContractDenseMulti(const DenseTensor& tensor,
                                   std::span<const Eigen::VectorXd> xs) {
  const int k = tensor.order();
  if (static_cast<int>(xs.size()) != k - 1) {
    throw ContractViolation("ContractDenseMulti needs k-1 vectors");
  }
  for (const auto& x : xs) {
    if (x.size() != tensor.dim()) throw ContractViolation("vector length mismatch");
  }
  std::vector<int> index(k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(tensor.dim());
  for (std::size_t lin = 0; lin < tensor.size(); ++lin) {
    const double t = tensor[lin];
    if (t == 0.0) continue;
    tensor.Unravel(lin, index);
    double prod = t;
    for (int j = 0; j < k - 1; ++j) prod *= xs[j][index[j]];
    out[index[k - 1]] += prod;
  }
  return out;
}

namespace {

std::vector<int> NondecreasingTuples(int length, int dim) {
  std::vector<int> flat;
  std::vector<int> tuple(length, 0);
  while (true) {
    flat.insert(flat.end(), tuple.begin(), tuple.end());
    int j = length - 1;
    while (j >= 0 && tuple[j] == dim - 1) --j;
    if (j < 0) break;
    ++tuple[j];
    for (int l = j + 1; l < length; ++l) tuple[l] = tuple[j];
  }
  return flat;
}

// Lexicographic rank of a nondecreasing tuple among all nondecreasing tuples
// of the same length over [0, dim).
std::size_t MultisetRank(std::span<const int> sorted, int dim) {
  // count[len][lo]: number of nondecreasing tuples of length len with all
  // entries >= lo.
  const int len = static_cast<int>(sorted.size());
  std::vector<std::vector<std::size_t>> count(len + 1, std::vector<std::size_t>(dim + 1, 0));
  for (int lo = 0; lo <= dim; ++lo) count[0][lo] = 1;
  for (int l = 1; l <= len; ++l) {
    for (int lo = dim - 1; lo >= 0; --lo) count[l][lo] = count[l][lo + 1] + count[l - 1][lo];
  }
  std::size_t rank = 0;
  int lo = 0;
  for (int p = 0; p < len; ++p) {
    for (int v = lo; v < sorted[p]; ++v) rank += count[len - p - 1][v];
    lo = sorted[p];
  }
  return rank;
}

}  // namespace

SymmetricTensor::SymmetricTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 2 || order > 16 || dim < 1) {
    throw ContractViolation("symmetric tensor needs 2 <= order <= 16 and dim >= 1");
  }
  auto plan = std::make_shared<Plan>();
  for (int l = 1; l <= order; ++l) plan->tuples.push_back(NondecreasingTuples(l, dim));
  std::vector<int> grown;
  for (int l = 2; l <= order; ++l) {
    const auto& parent = plan->tuples[l - 2];
    const std::size_t parents = parent.size() / (l - 1);
    std::vector<std::uint32_t> child(parents * dim);
    for (std::size_t u = 0; u < parents; ++u) {
      for (int j = 0; j < dim; ++j) {
        grown.assign(parent.begin() + u * (l - 1), parent.begin() + (u + 1) * (l - 1));
        grown.insert(std::upper_bound(grown.begin(), grown.end(), j), j);
        child[u * dim + j] = static_cast<std::uint32_t>(MultisetRank(grown, dim));
      }
    }
    plan->child.push_back(std::move(child));
  }
  const auto& top = plan->tuples.back();
  const std::size_t unique = top.size() / order;
  plan->multiplicity.resize(unique);
  for (std::size_t u = 0; u < unique; ++u) {
    plan->multiplicity[u] =
        OrderingCount(std::span<const int>(top.data() + u * order, static_cast<std::size_t>(order)));
  }
  plan_ = std::move(plan);
  values_.assign(unique, 0.0);
}

std::size_t SymmetricTensor::IndexOf(std::span<const int> sorted) const {
  return MultisetRank(sorted, dim_);
}

std::vector<double> SymmetricTensor::ContractTo(const Eigen::VectorXd& x, int stop) const {
  if (x.size() != dim_) throw ContractViolation("vector length mismatch");
  if (stop >= order_) return values_;
  const std::size_t n = static_cast<std::size_t>(dim_);
  const double* xs = x.data();
  std::vector<double> current;
  std::vector<double> next;
  const double* source = values_.data();
  for (int l = order_; l > stop; --l) {
    const auto& child = plan_->child[l - 2];
    const std::size_t parents = child.size() / n;
    next.resize(parents);
    for (std::size_t u = 0; u < parents; ++u) {
      const std::uint32_t* c = child.data() + u * n;
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += source[c[j]] * xs[j];
      next[u] = sum;
    }
    current.swap(next);
    source = current.data();
  }
  return current;
}

Eigen::VectorXd SymmetricTensor::Apply(const Eigen::VectorXd& x) const {
  const std::vector<double> level1 = ContractTo(x, 1);
  return Eigen::Map<const Eigen::VectorXd>(level1.data(), dim_);
}

double SymmetricTensor::ApplyScalar(const Eigen::VectorXd& x) const {
  return x.dot(Apply(x));
}

Eigen::MatrixXd SymmetricTensor::ApplyMatrix(const Eigen::VectorXd& x) const {
  const std::vector<double> level2 = ContractTo(x, 2);
  const auto& pairs = plan_->tuples[1];
  Eigen::MatrixXd out(dim_, dim_);
  for (std::size_t u = 0; u < level2.size(); ++u) {
    const int i = pairs[2 * u];
    const int j = pairs[2 * u + 1];
    out(i, j) = level2[u];
    out(j, i) = level2[u];
  }
  return out;
}

double SymmetricTensor::FrobeniusNorm() const {
  double total = 0.0;
  for (std::size_t u = 0; u < values_.size(); ++u) {
    total += plan_->multiplicity[u] * values_[u] * values_[u];
  }
  return std::sqrt(total);
}

SymmetricTensor SymmetricTensor::Negated() const {
  SymmetricTensor copy = *this;
  for (double& v : copy.values_) v = -v;
  return copy;
}

DenseTensor SymmetricTensor::ToDense(std::size_t budget) const {
  DenseTensor dense(order_, dim_, budget);
  std::vector<int> index;
  for (std::size_t u = 0; u < values_.size(); ++u) {
    const auto s = multiset(u);
    index.assign(s.begin(), s.end());
    do {
      dense.at(index) = values_[u];
    } while (std::next_permutation(index.begin(), index.end()));
  }
  return dense;
}

SymmetricTensor SymmetricTensor::FromDense(const DenseTensor& dense) {
  SymmetricTensor sym(dense.order(), dense.dim());
  for (std::size_t u = 0; u < sym.values_.size(); ++u) {
    sym.values_[u] = dense.at(sym.multiset(u));
  }
  return sym;
}

SymmetricTensor SymmetricTensor::FromMotif(const MotifTensor& tensor) {
  SymmetricTensor sym(tensor.order(), tensor.dim());
  for (std::size_t u = 0; u < sym.values_.size(); ++u) {
    sym.values_[u] = tensor.Entry(sym.multiset(u));
  }
  return sym;
}

SymmetricTensor SymmetricTensor::Diagonal(int order, int dim) {
  SymmetricTensor sym(order, dim);
  for (std::size_t u = 0; u < sym.values_.size(); ++u) {
    const auto s = sym.multiset(u);
    if (s.front() == s.back()) sym.values_[u] = 1.0;
  }
  return sym;
}

SymmetricTensor SymmetricTensor::Random(int order, int dim, std::mt19937_64& rng) {
  SymmetricTensor sym(order, dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : sym.values_) v = normal(rng);
  return sym;
}

}  // namespace kronalign
