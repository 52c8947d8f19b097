#ifndef KRONALIGN_PIPELINE_H_
#define KRONALIGN_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kronalign/align.h"
#include "kronalign/graph.h"
#include "kronalign/io.h"
#include "kronalign/matching.h"
#include "kronalign/refine.h"

namespace kronalign {

enum class Method { kTame, kLowRankTame, kLambdaTame };
enum class Refinement { kNone, kLocalSearch };

std::string MethodName(Method method);
Method ParseMethod(const std::string& name);
std::string RefinementName(Refinement refine);
Refinement ParseRefinement(const std::string& name);

struct RunOptions {
  Method method = Method::kLambdaTame;
  int motif_order = 3;
  AlignOptions align;
  Refinement refine = Refinement::kNone;
  RefineOptions refine_options;
  // Recorded only; every stage is deterministic.
  std::uint64_t seed = 0;
  // Use edges (k = 2) with a warning when either graph has no k-cliques.
  bool edge_fallback = false;
};

struct RunResult {
  Json record;
  Matching matching;
  AlignmentOutput output;
  AlignmentScore before_refine;
  AlignmentScore score;
};

// Clique tensors, alignment, optional local search and scoring, with the
// full RunRecord. Throws DegenerateError when a motif tensor is empty and no
// fallback is requested, InvariantViolation if refinement lowers the score.
RunResult RunAlignment(const Graph& a, const Graph& b, const RunOptions& options,
                       const std::vector<int>* truth = nullptr);

}  // namespace kronalign

#endif  // KRONALIGN_PIPELINE_H_
