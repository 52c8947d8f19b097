#include <random>
#include <vector>

#include "doctest.h"
#include "kronalign/dense_tensor.h"
#include "kronalign/errors.h"
#include "kronalign/motif_tensor.h"
#include "oracles.h"

using kronalign::MotifTensor;

namespace {

MotifTensor Triangle() { return MotifTensor(3, 3, {{0, 1, 2}}); }

MotifTensor ToMotif(const oracle::SparseSym& t) {
  return MotifTensor(t.order, t.dim, oracle::Keys(t), oracle::Values(t));
}

oracle::EntryFn EntryOf(const oracle::SparseSym& t) {
  return [&t](const oracle::Tuple& index) { return t.At(index); };
}

Eigen::VectorXd V(std::initializer_list<double> values) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

}  // namespace

TEST_CASE("motif tensor construction validates hyperedges") {
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 2, 1}}), kronalign::ContractViolation);
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 1, 1}}), kronalign::ContractViolation);
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 1, 3}}), kronalign::ContractViolation);
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 1, 2}, {0, 1, 2}}), kronalign::ContractViolation);
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 1}}), kronalign::ContractViolation);
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 1, 2}}, {-1.0}), kronalign::ContractViolation);
  CHECK_THROWS_AS(MotifTensor(3, 3, {{0, 1, 2}}, {1.0, 2.0}), kronalign::ContractViolation);

  const MotifTensor t(3, 4, {{1, 2, 3}, {0, 1, 3}}, {2.0, 5.0});
  REQUIRE(t.nnz() == 2);
  CHECK(t.Hyperedges() == std::vector<std::vector<int>>{{0, 1, 3}, {1, 2, 3}});
  CHECK(t.weight(0) == 5.0);
  CHECK(t.weight(1) == 2.0);
  CHECK(t.Entry(std::vector<int>{3, 2, 1}) == 2.0);
  CHECK(t.Entry(std::vector<int>{3, 3, 1}) == 0.0);
  CHECK(t.Entry(std::vector<int>{0, 2, 3}) == 0.0);
}

TEST_CASE("ttv_same on the single triangle") {
  const MotifTensor t = Triangle();
  CHECK(kronalign::TtvSame(t, V({1, 1, 1})) == V({2, 2, 2}));
  CHECK(kronalign::TtvSame(t, V({1, 0, 0})) == V({0, 0, 0}));
  CHECK(kronalign::TtvSame(t, V({1, 2, 3})) == V({12, 6, 4}));
  CHECK(kronalign::TtvScalar(t, V({1, 2, 3})) == doctest::Approx(36.0));
  CHECK(std::get<Eigen::VectorXd>(kronalign::Ttv(t, V({1, 1, 1}), 2)) == V({2, 2, 2}));
  CHECK(std::get<double>(kronalign::Ttv(t, V({1, 1, 1}), 3)) == doctest::Approx(6.0));
}

TEST_CASE("ttv rejects bad arguments") {
  const MotifTensor t = Triangle();
  CHECK_THROWS_AS(kronalign::TtvSame(t, V({1, 1})), kronalign::ContractViolation);
  CHECK_THROWS_AS(kronalign::TtvScalar(t, V({1, 1, 1, 1})), kronalign::ContractViolation);
  CHECK_THROWS_AS(kronalign::Ttv(t, V({1, 1, 1}), 1), kronalign::UnsupportedContraction);
  CHECK_THROWS_AS(kronalign::Ttv(t, V({1, 1, 1}), 4), kronalign::UnsupportedContraction);
  std::vector<Eigen::VectorXd> none;
  CHECK_THROWS_AS(kronalign::TtvMulti(t, none), kronalign::ContractViolation);
  std::vector<Eigen::VectorXd> one = {V({1, 1, 1})};
  CHECK_THROWS_AS(kronalign::TtvMulti(t, one), kronalign::ContractViolation);
  std::vector<Eigen::VectorXd> short_vec = {V({1, 1, 1}), V({1, 1})};
  CHECK_THROWS_AS(kronalign::TtvMulti(t, short_vec), kronalign::ContractViolation);
}

TEST_CASE("ttv_multi on the single triangle") {
  const MotifTensor t = Triangle();
  std::vector<Eigen::VectorXd> basis = {V({1, 0, 0}), V({0, 1, 0})};
  CHECK(kronalign::TtvMulti(t, basis) == V({0, 0, 1}));
  std::vector<Eigen::VectorXd> ones = {V({1, 1, 1}), V({1, 1, 1})};
  CHECK(kronalign::TtvMulti(t, ones) == V({2, 2, 2}));
  std::vector<Eigen::VectorXd> with_zero = {V({1, 2, 3}), V({0, 0, 0})};
  CHECK(kronalign::TtvMulti(t, with_zero) == V({0, 0, 0}));
}

TEST_CASE("empty tensor contracts to zero") {
  const MotifTensor t(4, 5);
  CHECK(t.empty());
  CHECK(kronalign::TtvSame(t, Eigen::VectorXd::Ones(5)).isZero(0.0));
  CHECK(kronalign::TtvScalar(t, Eigen::VectorXd::Ones(5)) == 0.0);
}

TEST_CASE("ttv_same matches the brute-force dense contraction") {
  std::mt19937_64 rng(11);
  for (int order = 2; order <= 4; ++order) {
    for (int dim = order; dim <= 5; ++dim) {
      for (int rep = 0; rep < 3; ++rep) {
        const auto sparse = oracle::RandomSparse(order, dim, 0.6, rng);
        const MotifTensor t = ToMotif(sparse);
        const Eigen::VectorXd x = oracle::RandomVector(dim, rng);
        const Eigen::VectorXd want = oracle::ContractSame(order, dim, EntryOf(sparse), x);
        const Eigen::VectorXd got = kronalign::TtvSame(t, x);
        if (want.isZero(0.0)) {
          CHECK(got.isZero(0.0));
          continue;
        }
        CHECK(oracle::RelErr(got, want) <= 1e-12);
        CHECK(oracle::RelErr(kronalign::TtvScalar(t, x),
                             oracle::ContractScalar(order, dim, EntryOf(sparse), x)) <= 1e-12);
        CHECK(oracle::RelErr(kronalign::TtvScalar(t, x), x.dot(got)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ttv_multi matches the brute-force contraction with distinct vectors") {
  std::mt19937_64 rng(12);
  for (int order = 2; order <= 5; ++order) {
    const int dim = order + 1;
    const auto sparse = oracle::RandomSparse(order, dim, 0.8, rng);
    if (sparse.entries.empty()) continue;
    const MotifTensor t = ToMotif(sparse);
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < order - 1; ++i) xs.push_back(oracle::RandomVector(dim, rng));
    const Eigen::VectorXd want = oracle::Contract(order, dim, EntryOf(sparse), xs);
    CHECK(oracle::RelErr(kronalign::TtvMulti(t, xs), want) <= 1e-12);

    Eigen::MatrixXd factors(dim, order - 1);
    std::vector<int> cols;
    for (int i = 0; i < order - 1; ++i) {
      factors.col(order - 2 - i) = xs[i];
      cols.push_back(order - 2 - i);
    }
    CHECK(oracle::RelErr(kronalign::TtvMultiColumns(t, factors, cols), want) <= 1e-12);
  }
}

TEST_CASE("ttv_multi with large permanents matches the brute force") {
  std::mt19937_64 rng(13);
  // order 7 uses permanents of size 6.
  const auto sparse = oracle::RandomSparse(7, 8, 0.5, rng);
  REQUIRE(!sparse.entries.empty());
  const MotifTensor t = ToMotif(sparse);
  std::vector<Eigen::VectorXd> xs;
  for (int i = 0; i < 6; ++i) xs.push_back(oracle::RandomVector(8, rng));
  const Eigen::VectorXd want = oracle::Contract(7, 8, EntryOf(sparse), xs);
  CHECK(oracle::RelErr(kronalign::TtvMulti(t, xs), want) <= 1e-12);
}

TEST_CASE("ttv_multi with equal vectors reduces to ttv_same") {
  std::mt19937_64 rng(14);
  for (int order = 3; order <= 8; ++order) {
    const int dim = order + 3;
    const auto sparse = oracle::RandomSparse(order, dim, 0.3, rng);
    if (sparse.entries.empty()) continue;
    const MotifTensor t = ToMotif(sparse);
    const Eigen::VectorXd x = oracle::RandomVector(dim, rng);
    const std::vector<Eigen::VectorXd> xs(order - 1, x);
    CHECK(oracle::RelErr(kronalign::TtvMulti(t, xs), kronalign::TtvSame(t, x)) <= 1e-12);
  }
}

TEST_CASE("ttv_multi is multilinear and symmetric in its arguments") {
  std::mt19937_64 rng(15);
  for (int order = 3; order <= 5; ++order) {
    const int dim = 6;
    const auto sparse = oracle::RandomSparse(order, dim, 0.5, rng);
    if (sparse.entries.empty()) continue;
    const MotifTensor t = ToMotif(sparse);
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < order - 1; ++i) xs.push_back(oracle::RandomVector(dim, rng));
    const Eigen::VectorXd y = oracle::RandomVector(dim, rng);
    const double a = 0.7;
    const double b = -1.3;
    for (int slot = 0; slot < order - 1; ++slot) {
      auto with_x = xs;
      auto with_y = xs;
      auto mixed = xs;
      with_y[slot] = y;
      mixed[slot] = a * xs[slot] + b * y;
      const Eigen::VectorXd want =
          a * kronalign::TtvMulti(t, with_x) + b * kronalign::TtvMulti(t, with_y);
      CHECK(oracle::RelErr(kronalign::TtvMulti(t, mixed), want) <= 1e-10);
    }
    auto reversed = xs;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(oracle::RelErr(kronalign::TtvMulti(t, reversed), kronalign::TtvMulti(t, xs)) <=
          1e-12);
  }
}

TEST_CASE("dense tensor helpers") {
  const MotifTensor t = Triangle();
  const auto dense = kronalign::DenseTensor::FromMotif(t);
  CHECK(dense.size() == 27);
  int nonzero = 0;
  for (std::size_t i = 0; i < dense.size(); ++i) nonzero += dense[i] != 0.0;
  CHECK(nonzero == 6);
  CHECK(dense.SymmetryDefect() == 0.0);
  std::vector<int> index(3);
  for (std::size_t lin = 0; lin < dense.size(); ++lin) {
    dense.Unravel(lin, index);
    CHECK(dense.Linear(index) == lin);
  }
  CHECK(dense.Linear(std::vector<int>{1, 0, 0}) == 1);
  CHECK(dense.Linear(std::vector<int>{0, 1, 0}) == 3);
  CHECK_THROWS_AS(kronalign::DenseTensor(5, 100, 1000), kronalign::BudgetExceeded);
}

TEST_CASE("packed symmetric tensor agrees with its dense form") {
  std::mt19937_64 rng(16);
  for (int order = 2; order <= 5; ++order) {
    for (int dim = 1; dim <= 4; ++dim) {
      const auto sym = kronalign::SymmetricTensor::Random(order, dim, rng);
      const auto dense = sym.ToDense();
      CHECK(dense.SymmetryDefect() == 0.0);
      const auto entry = [&dense](const oracle::Tuple& index) { return dense.at(index); };
      const Eigen::VectorXd x = oracle::RandomVector(dim, rng);
      const Eigen::VectorXd want = oracle::ContractSame(order, dim, entry, x);
      CHECK(oracle::RelErr(sym.Apply(x), want) <= 1e-12);
      CHECK(oracle::RelErr(sym.ApplyScalar(x), x.dot(want)) <= 1e-12);
      CHECK(kronalign::SymmetricTensor::FromDense(dense).ToDense().SymmetryDefect() == 0.0);
      const auto round_trip = kronalign::SymmetricTensor::FromDense(dense);
      for (std::size_t u = 0; u < sym.unique_count(); ++u) {
        CHECK(round_trip.value(u) == sym.value(u));
      }
      double frob = 0.0;
      for (std::size_t i = 0; i < dense.size(); ++i) frob += dense[i] * dense[i];
      CHECK(oracle::RelErr(sym.FrobeniusNorm(), std::sqrt(frob)) <= 1e-12);
      if (order >= 3) {
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
        oracle::ForEachIndex(order, dim, [&](const oracle::Tuple& index) {
          double v = dense.at(index);
          for (int t = 2; t < order; ++t) v *= x[index[t]];
          hess(index[0], index[1]) += v;
        });
        CHECK(oracle::RelErr(sym.ApplyMatrix(x), hess) <= 1e-12);
      }
    }
  }
}

TEST_CASE("packed symmetric tensor from a motif tensor") {
  std::mt19937_64 rng(17);
  const auto sparse = oracle::RandomSparse(4, 6, 0.5, rng);
  const MotifTensor t = ToMotif(sparse);
  const auto sym = kronalign::SymmetricTensor::FromMotif(t);
  const Eigen::VectorXd x = oracle::RandomVector(6, rng);
  CHECK(oracle::RelErr(sym.Apply(x), kronalign::TtvSame(t, x)) <= 1e-12);
  const auto diag = kronalign::SymmetricTensor::Diagonal(3, 4);
  CHECK(diag.Apply(Eigen::VectorXd::Ones(4)) == Eigen::VectorXd::Ones(4));
}
