#include "kronalign/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kronalign/errors.h"
#include "kronalign/util.h"

namespace kronalign {

namespace {

enum Stream : std::uint64_t {
  kNoiseA = 1,
  kNoiseB = 2,
  kPermute = 3,
  kReference = 4,
};

}  // namespace

Graph Rgg(int n, std::uint64_t seed) {
  if (n < 1) throw ContractViolation("rgg needs n >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> px(n);
  std::vector<double> py(n);
  for (int i = 0; i < n; ++i) {
    px[i] = unit(rng);
    py[i] = unit(rng);
  }
  if (n == 1) return Graph(1);
  std::lognormal_distribution<double> degree(std::log(5.0), 1.0);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<double, int>> dist;
  for (int i = 0; i < n; ++i) {
    const double draw = std::floor(degree(rng) + 0.5);
    const int k = static_cast<int>(std::clamp(draw, 1.0, static_cast<double>(n - 1)));
    dist.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = px[i] - px[j];
      const double dy = py[i] - py[j];
      dist.emplace_back(dx * dx + dy * dy, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int t = 0; t < k; ++t) edges.emplace_back(i, dist[t].second);
  }
  return Graph(n, edges);
}

Graph ErNoise(const Graph& graph, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("p must lie in [0, 1]");
  const int n = graph.n();
  const double pairs = 0.5 * static_cast<double>(n) * (n - 1);
  double q = 0.0;
  if (pairs > 0.0) {
    const double rho = static_cast<double>(graph.edge_count()) / pairs;
    if (rho >= 1.0) {
      if (p > 0.0) Warn("graph is complete; no edges can be added (q = 0)");
    } else {
      q = std::min(1.0, p * rho / (1.0 - rho));
    }
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(p);
  std::bernoulli_distribution add(q);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    const auto nb = graph.neighbors(u);
    auto it = nb.begin();
    for (int v = u + 1; v < n; ++v) {
      while (it != nb.end() && *it < v) ++it;
      const bool present = it != nb.end() && *it == v;
      if (present ? !drop(rng) : add(rng)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

Graph DuplicationNoise(const Graph& graph, double frac, double p_edge, std::uint64_t seed) {
  if (!(frac >= 0.0)) throw ContractViolation("frac must be nonnegative");
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) throw ContractViolation("p_edge must lie in [0, 1]");
  const int n = graph.n();
  const int copies = static_cast<int>(std::ceil(frac * n - 1e-9));
  std::vector<std::vector<int>> adjacency(n + copies);
  for (int v = 0; v < n; ++v) {
    const auto nb = graph.neighbors(v);
    adjacency[v].assign(nb.begin(), nb.end());
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p_edge);
  for (int c = 0; c < copies; ++c) {
    const int fresh = n + c;
    if (fresh == 0) break;
    std::uniform_int_distribution<int> pick(0, fresh - 1);
    const int source = pick(rng);
    const std::vector<int> nb = adjacency[source];
    for (int w : nb) {
      if (keep(rng)) {
        adjacency[fresh].push_back(w);
        adjacency[w].push_back(fresh);
      }
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n + copies; ++v) {
    for (int w : adjacency[v]) {
      if (v < w) edges.emplace_back(v, w);
    }
  }
  return Graph(n + copies, edges);
}

Graph ApplyPermutation(const Graph& graph, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != graph.n()) {
    throw ContractViolation("permutation length does not match the graph");
  }
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : graph.Edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph(graph.n(), edges);
}

std::pair<Graph, std::vector<int>> Permute(const Graph& graph, std::uint64_t seed) {
  std::vector<int> perm(graph.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return {ApplyPermutation(graph, perm), perm};
}

std::string ModelName(NoiseModel model) {
  return model == NoiseModel::kEr ? "er" : "duplication";
}

NoiseModel ParseModel(const std::string& name) {
  if (name == "er") return NoiseModel::kEr;
  if (name == "duplication") return NoiseModel::kDuplication;
  throw ContractViolation("unknown noise model '" + name + "'");
}

AlignmentProblem MakeProblem(int n, NoiseModel model, const NoiseParams& params,
                             std::uint64_t seed) {
  const Graph reference = Rgg(n, DeriveSeed(seed, kReference));
  auto noisy = [&](std::uint64_t stream) {
    const std::uint64_t s = DeriveSeed(seed, stream);
    return model == NoiseModel::kEr ? ErNoise(reference, params.p, s)
                                    : DuplicationNoise(reference, params.frac, params.p_edge, s);
  };
  AlignmentProblem problem;
  problem.a = noisy(kNoiseA);
  auto [b, perm] = Permute(noisy(kNoiseB), DeriveSeed(seed, kPermute));
  problem.b = std::move(b);
  problem.truth.assign(perm.begin(), perm.begin() + n);
  problem.model = ModelName(model);
  problem.n = n;
  problem.params = params;
  problem.seed = seed;
  return problem;
}

}  // namespace kronalign
