#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "kronalign/errors.h"
#include "kronalign/matching.h"
#include "kronalign/synth.h"
#include "kronalign/util.h"

using kronalign::Graph;

namespace {

Graph Complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

std::vector<int> SortedDegrees(const Graph& g) {
  std::vector<int> d(g.n());
  for (int v = 0; v < g.n(); ++v) d[v] = g.degree(v);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("rgg small cases") {
  CHECK(kronalign::Rgg(1, 1).edge_count() == 0);
  CHECK(kronalign::Rgg(1, 1).n() == 1);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = kronalign::Rgg(2, s);
    CHECK(g.edge_count() == 1);
  }
  CHECK_THROWS_AS(kronalign::Rgg(0, 1), kronalign::ContractViolation);
}

TEST_CASE("rgg every vertex has at least one neighbor and output is seeded") {
  const Graph g = kronalign::Rgg(300, 7);
  for (int v = 0; v < g.n(); ++v) CHECK(g.degree(v) >= 1);
  CHECK(kronalign::Rgg(300, 7) == g);
  CHECK_FALSE(kronalign::Rgg(300, 8) == g);
}

TEST_CASE("er noise extremes") {
  const Graph g = kronalign::Rgg(200, 3);
  CHECK(kronalign::ErNoise(g, 0.0, 5) == g);
  const Graph wiped = kronalign::ErNoise(g, 1.0, 5);
  for (auto [u, v] : g.Edges()) CHECK_FALSE(wiped.HasEdge(u, v));
  CHECK_THROWS_AS(kronalign::ErNoise(g, 1.5, 5), kronalign::ContractViolation);

  std::vector<std::string> warnings;
  auto previous = kronalign::SetWarningSink([&](const std::string& m) { warnings.push_back(m); });
  const Graph k6 = Complete(6);
  const Graph noisy = kronalign::ErNoise(k6, 0.3, 1);
  kronalign::SetWarningSink(previous);
  CHECK(warnings.size() == 1);
  CHECK(noisy.edge_count() <= k6.edge_count());
}

TEST_CASE("er deletions follow the binomial law") {
  // 1000-edge graph: a 1000-cycle plus nothing else.
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < 1000; ++v) edges.emplace_back(v, (v + 1) % 1000);
  const Graph g(1000, edges);
  REQUIRE(g.edge_count() == 1000);
  const double sd = std::sqrt(1000 * 0.05 * 0.95);
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph h = kronalign::ErNoise(g, 0.05, seed);
    int kept = 0;
    for (auto [u, v] : g.Edges()) kept += h.HasEdge(u, v);
    const int deleted = 1000 - kept;
    outside += std::abs(deleted - 50.0) > 3.0 * sd;
  }
  // Each seed falls outside 3 sd with probability about 0.003.
  CHECK(outside <= 2);
}

TEST_CASE("er noise preserves the expected edge count") {
  const Graph g = kronalign::Rgg(300, 11);
  const double e = static_cast<double>(g.edge_count());
  const double pairs = 300.0 * 299.0 / 2.0;
  const double rho = e / pairs;
  const double p = 0.05;
  const double q = p * rho / (1.0 - rho);
  const double var = e * p * (1 - p) + (pairs - e) * q * (1 - q);
  double total = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) total += kronalign::ErNoise(g, p, s).edge_count();
  const double mean = total / seeds;
  CHECK(std::abs(mean - e) <= 3.0 * std::sqrt(var / seeds));
}

TEST_CASE("duplication noise") {
  const Graph g = kronalign::Rgg(100, 2);
  CHECK(kronalign::DuplicationNoise(g, 0.0, 0.5, 1) == g);
  CHECK(kronalign::DuplicationNoise(g, 0.25, 0.5, 1).n() == 125);
  CHECK(kronalign::DuplicationNoise(g, 0.2, 0.5, 1).n() == 120);
  CHECK(kronalign::DuplicationNoise(Graph(7), 0.1, 0.5, 1).n() == 8);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph full = kronalign::DuplicationNoise(g, 0.01, 1.0, s);
    REQUIRE(full.n() == 101);
    // The copy's neighborhood equals some original vertex's neighborhood.
    const auto fresh = full.neighbors(100);
    bool found = false;
    for (int v = 0; v < 100 && !found; ++v) {
      const auto nb = g.neighbors(v);
      found = std::equal(nb.begin(), nb.end(), fresh.begin(), fresh.end());
    }
    CHECK(found);
    // Original edges are untouched.
    for (auto [u, v] : g.Edges()) CHECK(full.HasEdge(u, v));

    const Graph none = kronalign::DuplicationNoise(g, 0.01, 0.0, s);
    CHECK(none.degree(100) == 0);
    CHECK(none.edge_count() == g.edge_count());
  }
  CHECK_THROWS_AS(kronalign::DuplicationNoise(g, -0.1, 0.5, 1), kronalign::ContractViolation);
  CHECK_THROWS_AS(kronalign::DuplicationNoise(g, 0.1, 1.5, 1), kronalign::ContractViolation);
}

TEST_CASE("permutations") {
  const Graph g = kronalign::Rgg(80, 4);
  const auto [h, perm] = kronalign::Permute(g, 9);
  CHECK(SortedDegrees(h) == SortedDegrees(g));
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int v = 0; v < 80; ++v) CHECK(sorted[v] == v);
  for (auto [u, v] : g.Edges()) CHECK(h.HasEdge(perm[u], perm[v]));

  std::vector<int> inverse(80);
  for (int v = 0; v < 80; ++v) inverse[perm[v]] = v;
  CHECK(kronalign::ApplyPermutation(h, inverse) == g);
  std::vector<int> identity(80);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(kronalign::ApplyPermutation(g, identity) == g);
}

TEST_CASE("zero-noise problems are isomorphic through the truth") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = kronalign::MakeProblem(100, kronalign::NoiseModel::kEr, {.p = 0.0}, seed);
    CHECK(p.a.edge_count() == p.b.edge_count());
    for (auto [u, v] : p.a.Edges()) CHECK(p.b.HasEdge(p.truth[u], p.truth[v]));
  }
}

TEST_CASE("problem invariants") {
  for (auto model : {kronalign::NoiseModel::kEr, kronalign::NoiseModel::kDuplication}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = kronalign::MakeProblem(100, model, {}, seed);
      const auto again = kronalign::MakeProblem(100, model, {}, seed);
      CHECK(again.a == p.a);
      CHECK(again.b == p.b);
      CHECK(again.truth == p.truth);
      REQUIRE(p.truth.size() == 100);
      std::vector<int> sorted = p.truth;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      CHECK(sorted.back() < p.b.n());
      kronalign::Matching exact(p.a.n(), p.b.n());
      for (int i = 0; i < 100; ++i) exact.Add(i, p.truth[i]);
      CHECK(kronalign::Accuracy(exact, p.truth) == 1.0);
      if (model == kronalign::NoiseModel::kDuplication) {
        CHECK(p.a.n() == 125);
        CHECK(p.b.n() == 125);
      }
    }
  }
  CHECK(kronalign::ParseModel("er") == kronalign::NoiseModel::kEr);
  CHECK_THROWS_AS(kronalign::ParseModel("ba"), kronalign::ContractViolation);
}

TEST_CASE("rgg mean degree agrees with a simulation of the generator") {
  // Independent Monte-Carlo of the specified process: uniform points, each
  // linking to its k nearest points, union of the links.
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::lognormal_distribution<double> lognormal(std::log(5.0), 1.0);
  const int n = 1000;
  double oracle_mean = 0.0;
  const int runs = 20;
  for (int r = 0; r < runs; ++r) {
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = unit(rng);
      y[i] = unit(rng);
    }
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::size_t edges = 0;
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(std::clamp(std::round(lognormal(rng)), 1.0, n - 1.0));
      std::vector<std::pair<double, int>> d;
      for (int j = 0; j < n; ++j) {
        if (j != i) d.emplace_back(std::hypot(x[i] - x[j], y[i] - y[j]), j);
      }
      std::sort(d.begin(), d.end());
      for (int t = 0; t < k; ++t) {
        const int j = d[t].second;
        if (!adj[i][j]) {
          adj[i][j] = adj[j][i] = 1;
          ++edges;
        }
      }
    }
    oracle_mean += 2.0 * edges / n / runs;
  }
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    mean += 2.0 * kronalign::Rgg(n, seed).edge_count() / n / 20;
  }
  CHECK(mean >= 0.95 * oracle_mean);
  CHECK(mean <= 1.05 * oracle_mean);
}
