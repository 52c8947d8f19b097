#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kronalign/errors.h"
#include "kronalign/kron_ops.h"
#include "kronalign/tensor_eigen.h"
#include "oracles.h"

using kronalign::DominantOptions;
using kronalign::EigenPair;
using kronalign::MotifTensor;
using kronalign::SymmetricTensor;
using kronalign::TensorOperator;

namespace {

MotifTensor Triangle() { return MotifTensor(3, 3, {{0, 1, 2}}); }

// Residual of the eigen-equations recomputed from the brute-force dense form.
double OracleResidual(const SymmetricTensor& t, const EigenPair& pair) {
  const auto dense = t.ToDense();
  const auto entry = [&dense](const oracle::Tuple& i) { return dense.at(i); };
  const Eigen::VectorXd g = oracle::ContractSame(t.order(), t.dim(), entry, pair.vector);
  return (g - pair.lambda * pair.vector).norm();
}

bool HasValue(const std::vector<EigenPair>& pairs, double value, double tol) {
  for (const auto& p : pairs) {
    if (std::abs(p.lambda - value) <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("sshopm fixed points") {
  const TensorOperator d2(SymmetricTensor::Diagonal(3, 2));
  const EigenPair p = kronalign::Sshopm(d2, 0.0, Eigen::Vector2d(1, 0));
  CHECK(p.converged);
  CHECK(p.lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((p.vector - Eigen::Vector2d(1, 0)).norm() <= 1e-14);

  const TensorOperator tri(Triangle());
  const EigenPair q = kronalign::Sshopm(tri, 0.0, Eigen::Vector3d(1, 1, 1));
  CHECK(q.converged);
  CHECK(q.lambda == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK((q.vector - Eigen::Vector3d::Ones() / std::sqrt(3.0)).norm() <= 1e-14);
  CHECK(q.residual <= 1e-14);

  const TensorOperator zero(MotifTensor(3, 3));
  const Eigen::Vector3d x0(3, 0, 4);
  const EigenPair z = kronalign::Sshopm(zero, 1.0, x0);
  CHECK(z.converged);
  CHECK(z.lambda == 0.0);
  CHECK((z.vector - x0 / 5.0).norm() <= 1e-15);
}

TEST_CASE("sshopm errors and non-convergence") {
  const TensorOperator tri(Triangle());
  CHECK_THROWS_AS(kronalign::Sshopm(tri, 0.0, Eigen::Vector3d::Zero()),
                  kronalign::ContractViolation);
  CHECK_THROWS_AS(kronalign::Sshopm(tri, 0.0, Eigen::Vector2d(1, 0)),
                  kronalign::ContractViolation);
  // T x^2 = 0 at e_1 and there is no shift.
  CHECK_THROWS_AS(kronalign::Sshopm(tri, 0.0, Eigen::Vector3d(1, 0, 0)),
                  kronalign::DegenerateError);
  std::mt19937_64 rng(31);
  const TensorOperator rnd(SymmetricTensor::Random(4, 5, rng));
  const EigenPair p = kronalign::Sshopm(rnd, 0.0, Eigen::VectorXd::Ones(5), {1e-14, 2});
  CHECK_FALSE(p.converged);
  CHECK(p.iterations == 2);
  CHECK(std::abs(p.vector.norm() - 1.0) <= 1e-12);
}

TEST_CASE("dominant eigenpairs of small tensors") {
  DominantOptions opts;
  opts.restarts = 50;
  const auto d2 = kronalign::DominantEigen(TensorOperator(SymmetricTensor::Diagonal(3, 2)), opts);
  CHECK(d2.converged);
  CHECK(std::abs(d2.lambda) == doctest::Approx(1.0).epsilon(1e-9));
  const auto d4 = kronalign::DominantEigen(TensorOperator(SymmetricTensor::Diagonal(3, 4)), opts);
  CHECK(std::abs(d4.lambda) == doctest::Approx(1.0).epsilon(1e-9));
  const auto tri = kronalign::DominantEigen(TensorOperator(Triangle()), opts);
  CHECK(tri.converged);
  CHECK(tri.lambda == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  opts.restarts = 0;
  CHECK_THROWS_AS(kronalign::DominantEigen(TensorOperator(Triangle()), opts),
                  kronalign::ContractViolation);
}

TEST_CASE("dominant eigenpair properties on random tensors") {
  std::mt19937_64 rng(32);
  DominantOptions opts;
  opts.restarts = 40;
  for (int order = 3; order <= 5; ++order) {
    for (int dim = 2; dim <= 4; ++dim) {
      const auto t = SymmetricTensor::Random(order, dim, rng);
      const TensorOperator op(t);
      const EigenPair p = kronalign::DominantEigen(op, opts);
      CHECK(p.converged);
      CHECK(std::abs(p.vector.norm() - 1.0) <= 1e-12);
      CHECK(p.residual <= 10 * opts.tol);
      CHECK(std::abs(OracleResidual(t, p) - p.residual) <= 1e-12);
      if (order % 2 == 1) {
        EigenPair flipped = p;
        flipped.lambda = -p.lambda;
        flipped.vector = -p.vector;
        CHECK(OracleResidual(t, flipped) <= 10 * opts.tol);
        CHECK(p.lambda >= 0.0);
      }
      // No random start does better than the returned |lambda|.
      for (int s = 0; s < 200; ++s) {
        Eigen::VectorXd x = oracle::RandomVector(dim, rng);
        x.normalize();
        CHECK(std::abs(t.ApplyScalar(x)) <= std::abs(p.lambda) + 1e-9);
      }
      // Same seed, same answer.
      const EigenPair again = kronalign::DominantEigen(op, opts);
      CHECK(again.lambda == p.lambda);
      CHECK(again.vector == p.vector);
    }
  }
}

TEST_CASE("nonnegative tensors have a nonnegative dominant eigenvalue") {
  std::mt19937_64 rng(33);
  for (int order = 3; order <= 4; ++order) {
    auto t = SymmetricTensor::Random(order, 4, rng);
    for (std::size_t u = 0; u < t.unique_count(); ++u) t.set_value(u, std::abs(t.value(u)));
    DominantOptions opts;
    opts.restarts = 30;
    const auto p = kronalign::DominantEigen(TensorOperator(t), opts);
    CHECK(p.lambda >= 0.0);
  }
}

TEST_CASE("spectrum sample of diagonal tensors") {
  const auto d2 = kronalign::SpectrumSample(SymmetricTensor::Diagonal(3, 2), 200, 1);
  CHECK(HasValue(d2, 1.0, 1e-8));
  CHECK(HasValue(d2, 1.0 / std::sqrt(2.0), 1e-8));
  CHECK(std::abs(d2.front().lambda) == doctest::Approx(1.0));
  for (std::size_t i = 1; i < d2.size(); ++i) {
    CHECK(std::abs(d2[i - 1].lambda) >= std::abs(d2[i].lambda));
  }

  const auto d4 = kronalign::SpectrumSample(SymmetricTensor::Diagonal(3, 4), 500, 2);
  for (double v : {1.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0), 0.5}) {
    CHECK(HasValue(d4, v, 1e-8));
  }
  for (const auto& p : d4) {
    CHECK(p.residual <= 1e-8);
    if (std::abs(std::abs(p.lambda) - 1.0 / std::sqrt(3.0)) > 1e-8) continue;
    // Three coordinates equal to 1/sqrt(3) up to sign, one zero.
    Eigen::VectorXd mag = p.vector.cwiseAbs();
    std::sort(mag.data(), mag.data() + mag.size());
    CHECK(mag[0] <= 1e-8);
    for (int i = 1; i < 4; ++i) CHECK(std::abs(mag[i] - 1.0 / std::sqrt(3.0)) <= 1e-8);
  }

  const auto zero = kronalign::SpectrumSample(SymmetricTensor(3, 3), 20, 3);
  REQUIRE(zero.size() == 1);
  CHECK(zero.front().lambda == 0.0);
}

TEST_CASE("decoupling of dominant pairs") {
  DominantOptions opts;
  opts.restarts = 50;
  const auto d2 = SymmetricTensor::Diagonal(3, 2);
  const auto r = kronalign::VerifyDecoupling(d2, d2, opts);
  CHECK(r.eig_gap <= 1e-12);
  CHECK(r.vec_gap <= 1e-12);

  const auto tri = SymmetricTensor::FromMotif(Triangle());
  const auto s = kronalign::VerifyDecoupling(tri, tri, opts);
  CHECK(s.lambda_kron == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(s.vec_gap <= 1e-6);
  CHECK(s.eig_gap >= 0.0);

  kronalign::DecouplingGrid grid;
  grid.dims = {2, 3};
  grid.orders = {3, 4};
  const auto reports = kronalign::RunDecouplingTrials(grid, 6, 7, opts);
  REQUIRE(reports.size() == 6);
  for (const auto& rep : reports) {
    CHECK(rep.eig_gap <= 1e-6);
    CHECK(rep.vec_gap <= 1e-6);
  }
  CHECK_THROWS_AS(kronalign::VerifyDecoupling(tri, tri, opts, 100), kronalign::BudgetExceeded);
}
