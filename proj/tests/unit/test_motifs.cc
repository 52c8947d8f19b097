#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kronalign/errors.h"
#include "kronalign/graph.h"
#include "kronalign/io.h"
#include "kronalign/util.h"
#include "oracles.h"

using kronalign::Graph;

namespace {

Graph Complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

Graph FromSet(int n, const oracle::EdgeSet& set) {
  return Graph(n, std::vector<std::pair<int, int>>(set.begin(), set.end()));
}

// Collects warnings for the lifetime of the object.
struct WarningCapture {
  std::vector<std::string> messages;
  kronalign::WarningSink previous;
  WarningCapture() {
    previous = kronalign::SetWarningSink([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { kronalign::SetWarningSink(previous); }
};

}  // namespace

TEST_CASE("graph construction merges and validates") {
  const Graph g(4, {{0, 1}, {1, 0}, {0, 1}, {2, 3}});
  CHECK(g.n() == 4);
  CHECK(g.edge_count() == 2);
  CHECK(g.HasEdge(1, 0));
  CHECK_FALSE(g.HasEdge(1, 2));
  CHECK(g.Edges() == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), kronalign::ContractViolation);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), kronalign::ContractViolation);
}

TEST_CASE("clique examples") {
  CHECK(kronalign::EnumerateCliques(Complete(3), 3) == std::vector<std::vector<int>>{{0, 1, 2}});
  const Graph path(3, {{0, 1}, {1, 2}});
  CHECK(kronalign::EnumerateCliques(path, 3).empty());
  CHECK(kronalign::CliqueTensor(Complete(4), 3).nnz() == 4);
  CHECK_THROWS_AS(kronalign::EnumerateCliques(path, 1), kronalign::ContractViolation);
  CHECK_THROWS_AS(kronalign::EnumerateCliques(path, 10), kronalign::ContractViolation);
}

TEST_CASE("k = 2 clique tensor is the adjacency matrix") {
  const Graph path(3, {{0, 1}, {1, 2}});
  const auto t = kronalign::CliqueTensor(path, 2);
  CHECK(t.nnz() == 2);
  const Eigen::VectorXd y = kronalign::TtvSame(t, Eigen::Vector3d(1.0, 2.0, 3.0));
  CHECK(y[0] == doctest::Approx(2.0));
  CHECK(y[1] == doctest::Approx(4.0));
  CHECK(y[2] == doctest::Approx(2.0));
}

TEST_CASE("triangle tensor of K3 contracts to (2, 2, 2)") {
  const auto t = kronalign::CliqueTensor(Complete(3), 3);
  const Eigen::VectorXd y = kronalign::TtvSame(t, Eigen::Vector3d::Ones());
  CHECK(y.isApprox(Eigen::Vector3d::Constant(2.0)));
}

TEST_CASE("triangle-free graph gives an empty tensor with a warning") {
  WarningCapture warnings;
  const Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto t = kronalign::CliqueTensor(c4, 3);
  CHECK(t.empty());
  CHECK(warnings.messages.size() == 1);
}

TEST_CASE("cliques match the brute-force subset check") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + trial % 10;  // up to 15
    const auto edges = oracle::RandomEdges(n, trial < 10 ? 0.5 : 0.8, rng);
    const Graph g = FromSet(n, edges);
    for (int k = 2; k <= 9; ++k) {
      CAPTURE(trial);
      CAPTURE(k);
      CHECK(kronalign::EnumerateCliques(g, k) == oracle::SubsetCliques(n, edges, k));
    }
  }
}

TEST_CASE("adding an edge never lowers a clique count") {
  std::mt19937_64 rng(5);
  auto edges = oracle::RandomEdges(12, 0.4, rng);
  std::uniform_int_distribution<int> pick(0, 11);
  for (int step = 0; step < 30; ++step) {
    const Graph before = FromSet(12, edges);
    int u = pick(rng);
    int v = pick(rng);
    if (u == v) continue;
    edges.insert({std::min(u, v), std::max(u, v)});
    const Graph after = FromSet(12, edges);
    for (int k = 2; k <= 6; ++k) {
      CHECK(kronalign::EnumerateCliques(after, k).size() >=
            kronalign::EnumerateCliques(before, k).size());
    }
  }
}

TEST_CASE("edge list parsing") {
  WarningCapture warnings;
  std::istringstream in("# comment\n1 2\n2 1  # reversed\n\n3 3\n2 4\n");
  const Graph g = kronalign::ReadEdgeList(in);
  CHECK(g.n() == 4);
  CHECK(g.edge_count() == 2);
  CHECK(warnings.messages.size() == 1);

  std::istringstream bad("1 2\n2 x\n");
  CHECK_THROWS_AS(kronalign::ReadEdgeList(bad), kronalign::ParseError);
  std::istringstream zero("0 1\n");
  CHECK_THROWS_AS(kronalign::ReadEdgeList(zero), kronalign::ParseError);
  std::istringstream three("1 2 3\n");
  CHECK_THROWS_AS(kronalign::ReadEdgeList(three), kronalign::ParseError);
  CHECK_THROWS_AS(kronalign::LoadEdgeList("/nonexistent/graph.el"), kronalign::ParseError);
}

TEST_CASE("edge list round trip keeps isolated vertices") {
  std::mt19937_64 rng(3);
  const auto edges = oracle::RandomEdges(15, 0.2, rng);
  const Graph g = FromSet(20, edges);
  std::stringstream io;
  kronalign::WriteEdgeList(io, g);
  CHECK(kronalign::ReadEdgeList(io) == g);
}
