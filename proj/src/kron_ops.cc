#include "kronalign/kron_ops.h"

#include <limits>
#include <string>
#include <vector>

#include "kronalign/errors.h"
#include "kronalign/permanent.h"

namespace kronalign {

namespace {

void CheckShape(const KronPairView& pair, Eigen::Index rows, Eigen::Index cols) {
  if (rows != pair.m() || cols != pair.n()) {
    throw ContractViolation("matrix is " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", expected " +
                            std::to_string(pair.m()) + "x" + std::to_string(pair.n()));
  }
}

// Advances a tuple in [r]^{len} lexicographically; false after the last.
bool NextTuple(std::vector<int>& tuple, int rank) {
  for (int j = static_cast<int>(tuple.size()) - 1; j >= 0; --j) {
    if (++tuple[j] < rank) return true;
    tuple[j] = 0;
  }
  return false;
}

}  // namespace

KronPairView::KronPairView(const MotifTensor& a, const MotifTensor& b)
    : a_(&a), b_(&b) {
  if (a.order() != b.order()) {
    throw ContractViolation("Kronecker operands have orders " +
                            std::to_string(a.order()) + " and " +
                            std::to_string(b.order()));
  }
}

Eigen::VectorXd Vec(const Eigen::MatrixXd& x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
}

Eigen::MatrixXd Unvec(const Eigen::VectorXd& v, int m, int n) {
  if (v.size() != static_cast<Eigen::Index>(m) * n) {
    throw ContractViolation("unvec length mismatch");
  }
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), m, n);
}

Eigen::MatrixXd ImplicitKronTtv(const KronPairView& pair, const Eigen::MatrixXd& x) {
  CheckShape(pair, x.rows(), x.cols());
  const int k = pair.order();
  if (k - 1 > kMaxPermanent) throw ContractViolation("motif order too large");
  const MotifTensor& a = pair.a();
  const MotifTensor& b = pair.b();
  const double orientations = Factorial(k - 1);
  const Eigen::Index n = pair.n();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(pair.m(), n);
  PermanentBuffer buffer{};
  // Rows of x at the current A hyperedge, stored column by column so the
  // k x k block x(edge_a, edge_b) is read from k short contiguous runs.
  std::vector<double> rows(static_cast<std::size_t>(n) * k);
  double block[(kMaxPermanent + 1) * (kMaxPermanent + 1)];
  for (std::size_t ea = 0; ea < a.nnz(); ++ea) {
    const auto edge_a = a.hyperedge(ea);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (int i = 0; i < k; ++i) rows[c * k + i] = x(edge_a[i], c);
    }
    const double wa = a.weight(ea) * orientations;
    for (std::size_t eb = 0; eb < b.nnz(); ++eb) {
      const auto edge_b = b.hyperedge(eb);
      const double w = wa * b.weight(eb);
      for (int j = 0; j < k; ++j) {
        const double* col = &rows[static_cast<std::size_t>(edge_b[j]) * k];
        for (int i = 0; i < k; ++i) block[i * k + j] = col[i];
      }
      if (k == 3) {
        // 2 x 2 permanents of the block with row p and column q removed.
        for (int p = 0; p < 3; ++p) {
          const int p1 = p == 0 ? 1 : 0;
          const int p2 = p == 2 ? 1 : 2;
          for (int q = 0; q < 3; ++q) {
            const int q1 = q == 0 ? 1 : 0;
            const int q2 = q == 2 ? 1 : 2;
            y(edge_a[p], edge_b[q]) += w * (block[p1 * 3 + q1] * block[p2 * 3 + q2] +
                                             block[p1 * 3 + q2] * block[p2 * 3 + q1]);
          }
        }
        continue;
      }
      for (int p = 0; p < k; ++p) {
        for (int q = 0; q < k; ++q) {
          int s = 0;
          for (int i = 0; i < k; ++i) {
            if (i == p) continue;
            int t = 0;
            for (int j = 0; j < k; ++j) {
              if (j == q) continue;
              buffer[s * kMaxPermanent + t] = block[i * k + j];
              ++t;
            }
            ++s;
          }
          y(edge_a[p], edge_b[q]) += w * Permanent(buffer, k - 1);
        }
      }
    }
  }
  return y;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Rank1KronTtv(const KronPairView& pair,
                                                        const Eigen::VectorXd& u,
                                                        const Eigen::VectorXd& v) {
  return {TtvSame(pair.a(), u), TtvSame(pair.b(), v)};
}

std::pair<double, double> Rank1KronScalar(const KronPairView& pair,
                                          const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& v) {
  return {TtvScalar(pair.a(), u), TtvScalar(pair.b(), v)};
}

std::size_t ExpandedColumnCount(int rank, int order) {
  std::size_t total = 1;
  for (int j = 0; j < order - 1; ++j) {
    if (total > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(rank)) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= static_cast<std::size_t>(rank);
  }
  return total;
}

std::vector<std::vector<int>> ColumnTuples(int rank, int order,
                                           std::size_t column_cap) {
  if (rank < 1) throw ContractViolation("rank must be positive");
  const std::size_t count = ExpandedColumnCount(rank, order);
  if (count > column_cap) {
    throw BudgetExceeded(std::to_string(rank) + "^" + std::to_string(order - 1) +
                         " columns exceed the column cap of " +
                         std::to_string(column_cap));
  }
  std::vector<std::vector<int>> tuples;
  tuples.reserve(count);
  std::vector<int> tuple(order - 1, 0);
  do {
    tuples.push_back(tuple);
  } while (NextTuple(tuple, rank));
  return tuples;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> LowrankKronTtv(const KronPairView& pair,
                                                           const Eigen::MatrixXd& u,
                                                           const Eigen::MatrixXd& v,
                                                           std::size_t column_cap) {
  if (u.cols() != v.cols()) {
    throw ContractViolation("factor column counts differ: " + std::to_string(u.cols()) +
                            " vs " + std::to_string(v.cols()));
  }
  if (u.rows() != pair.m() || v.rows() != pair.n()) {
    throw ContractViolation("factor row counts do not match tensor dimensions");
  }
  const auto tuples = ColumnTuples(static_cast<int>(u.cols()), pair.order(), column_cap);
  Eigen::MatrixXd u_next(pair.m(), static_cast<Eigen::Index>(tuples.size()));
  Eigen::MatrixXd v_next(pair.n(), static_cast<Eigen::Index>(tuples.size()));
  for (std::size_t c = 0; c < tuples.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    u_next.col(col) = TtvMultiColumns(pair.a(), u, tuples[c]);
    v_next.col(col) = TtvMultiColumns(pair.b(), v, tuples[c]);
  }
  return {std::move(u_next), std::move(v_next)};
}

Eigen::MatrixXd AccumulatedKronTtv(const KronPairView& pair, const Eigen::MatrixXd& u,
                                   const Eigen::MatrixXd& v, int batch) {
  if (u.cols() != v.cols()) throw ContractViolation("factor column counts differ");
  if (u.rows() != pair.m() || v.rows() != pair.n()) {
    throw ContractViolation("factor row counts do not match tensor dimensions");
  }
  if (batch < 1) throw ContractViolation("batch size must be positive");
  const int rank = static_cast<int>(u.cols());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(pair.m(), pair.n());
  Eigen::MatrixXd ub(pair.m(), batch);
  Eigen::MatrixXd vb(pair.n(), batch);
  std::vector<int> tuple(pair.order() - 1, 0);
  bool more = true;
  while (more) {
    int filled = 0;
    while (more && filled < batch) {
      ub.col(filled) = TtvMultiColumns(pair.a(), u, tuple);
      vb.col(filled) = TtvMultiColumns(pair.b(), v, tuple);
      ++filled;
      more = NextTuple(tuple, rank);
    }
    y.noalias() += ub.leftCols(filled) * vb.leftCols(filled).transpose();
  }
  return y;
}

DenseTensor ExplicitKron(const DenseTensor& a, const DenseTensor& b,
                         std::size_t budget) {
  if (a.order() != b.order()) throw ContractViolation("Kronecker operand orders differ");
  const int k = a.order();
  const int m = a.dim();
  DenseTensor out(k, m * b.dim(), budget);
  std::vector<int> ia(k);
  std::vector<int> ib(k);
  std::vector<int> joint(k);
  for (std::size_t la = 0; la < a.size(); ++la) {
    if (a[la] == 0.0) continue;
    a.Unravel(la, ia);
    for (std::size_t lb = 0; lb < b.size(); ++lb) {
      if (b[lb] == 0.0) continue;
      b.Unravel(lb, ib);
      for (int j = 0; j < k; ++j) {
        joint[j] = static_cast<int>(Interleave(ia[j], ib[j], m));
      }
      out.at(joint) = a[la] * b[lb];
    }
  }
  return out;
}

DenseTensor ExplicitKron(const KronPairView& pair, std::size_t budget) {
  // Check the product size before densifying the operands.
  const std::size_t product_dim = static_cast<std::size_t>(pair.m()) * pair.n();
  std::size_t total = 1;
  for (int j = 0; j < pair.order(); ++j) {
    if (total > budget / product_dim) {
      throw BudgetExceeded("explicit Kronecker product exceeds the oracle budget");
    }
    total *= product_dim;
  }
  return ExplicitKron(DenseTensor::FromMotif(pair.a(), budget),
                      DenseTensor::FromMotif(pair.b(), budget), budget);
}

}  // namespace kronalign
