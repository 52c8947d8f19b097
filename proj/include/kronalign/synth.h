#ifndef KRONALIGN_SYNTH_H_
#define KRONALIGN_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kronalign/graph.h"

namespace kronalign {

// n uniform points in the unit square; every point links to its k nearest
// points with k = round(lognormal(ln 5, 1)) clamped to [1, n-1], then edges
// are symmetrized.
Graph Rgg(int n, std::uint64_t seed);

// Deletes each edge with probability p and adds each non-edge with
// probability q = p rho / (1 - rho), rho = |E| / C(n, 2). For a complete
// graph q is taken as 0 with a warning.
Graph ErNoise(const Graph& graph, double p, std::uint64_t seed);

// ceil(frac n) times: copy a uniformly chosen current vertex into a new vertex
// that keeps each of the source's edges with probability p_edge.
Graph DuplicationNoise(const Graph& graph, double frac, double p_edge, std::uint64_t seed);

// Uniform relabeling; perm[v] is the new id of vertex v.
std::pair<Graph, std::vector<int>> Permute(const Graph& graph, std::uint64_t seed);

// Relabels with a given permutation (perm[v] = new id of v).
Graph ApplyPermutation(const Graph& graph, const std::vector<int>& perm);

enum class NoiseModel { kEr, kDuplication };

struct NoiseParams {
  double p = 0.05;       // er
  double frac = 0.25;    // duplication
  double p_edge = 0.5;   // duplication
};

struct AlignmentProblem {
  Graph a;
  Graph b;
  // truth[i] = id in b of reference vertex i of a.
  std::vector<int> truth;
  std::string model;
  int n = 0;
  NoiseParams params;
  std::uint64_t seed = 0;
};

std::string ModelName(NoiseModel model);
NoiseModel ParseModel(const std::string& name);

// One reference graph, independent noise on two copies, then B is permuted.
AlignmentProblem MakeProblem(int n, NoiseModel model, const NoiseParams& params,
                             std::uint64_t seed);

}  // namespace kronalign

#endif  // KRONALIGN_SYNTH_H_
