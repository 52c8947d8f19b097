#include "kronalign/pipeline.h"

#include <algorithm>
#include <chrono>

#include "kronalign/errors.h"
#include "kronalign/util.h"

namespace kronalign {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Json ScoreJson(const AlignmentScore& score) {
  return Json{{"motifs", score.motifs}, {"edges", score.edges}};
}

Json OptionsJson(const RunOptions& options) {
  const auto& align = options.align;
  Json out{{"alpha", align.alpha},
           {"beta", align.beta},
           {"iters", align.max_iter},
           {"tol", align.tol},
           {"trunc_tol", align.trunc_tol},
           {"column_cap", align.column_cap},
           {"batch", align.batch},
           {"refine", RefinementName(options.refine)},
           {"max_sweeps", options.refine_options.max_sweeps},
           {"edge_fallback", options.edge_fallback}};
  out["match_every"] = align.match_every ? Json(*align.match_every) : Json(nullptr);
  out["knn"] = options.refine_options.knn ? Json(*options.refine_options.knn) : Json("auto");
  return out;
}

}  // namespace

std::string MethodName(Method method) {
  switch (method) {
    case Method::kTame:
      return "tame";
    case Method::kLowRankTame:
      return "lowrank-tame";
    case Method::kLambdaTame:
      return "lambda-tame";
  }
  return "";
}

Method ParseMethod(const std::string& name) {
  if (name == "tame") return Method::kTame;
  if (name == "lowrank-tame") return Method::kLowRankTame;
  if (name == "lambda-tame") return Method::kLambdaTame;
  throw ContractViolation("unknown method '" + name + "'");
}

std::string RefinementName(Refinement refine) {
  return refine == Refinement::kNone ? "none" : "local-search";
}

Refinement ParseRefinement(const std::string& name) {
  if (name == "none") return Refinement::kNone;
  if (name == "local-search") return Refinement::kLocalSearch;
  throw ContractViolation("unknown refinement '" + name + "'");
}

RunResult RunAlignment(const Graph& a, const Graph& b, const RunOptions& options,
                       const std::vector<int>* truth) {
  const auto total_start = Clock::now();
  if (options.motif_order < kMinCliqueOrder || options.motif_order > kMaxCliqueOrder) {
    throw ContractViolation("motif order must lie in [" + std::to_string(kMinCliqueOrder) + ", " +
                            std::to_string(kMaxCliqueOrder) + "]");
  }
  if (a.n() == 0 || b.n() == 0) throw DegenerateError("cannot align an empty graph");

  auto start = Clock::now();
  int order = options.motif_order;
  MotifTensor ta = CliqueTensor(a, order);
  MotifTensor tb = CliqueTensor(b, order);
  bool fell_back = false;
  if (ta.empty() || tb.empty()) {
    if (!options.edge_fallback || order == 2) {
      throw DegenerateError("motif tensor of order " + std::to_string(order) +
                            " is empty for graph " + (ta.empty() ? "A" : "B"));
    }
    Warn("falling back to edge motifs (k = 2)");
    order = 2;
    fell_back = true;
    ta = CliqueTensor(a, order);
    tb = CliqueTensor(b, order);
  }
  const double motif_seconds = Seconds(start);

  RunResult result;
  switch (options.method) {
    case Method::kTame:
      result.output = Tame(ta, tb, options.align);
      break;
    case Method::kLowRankTame:
      result.output = LowRankTame(ta, tb, options.align);
      break;
    case Method::kLambdaTame:
      result.output = LambdaTame(ta, tb, options.align);
      break;
  }
  const AlignmentOutput& output = result.output;

  start = Clock::now();
  result.matching = output.best_matching;
  result.before_refine = ScoreMatching(result.matching, a, b, ta, tb);
  Json refine_json = nullptr;
  if (options.refine == Refinement::kLocalSearch && a.n() > 1 && b.n() > 1) {
    const FactorPair factors = EmbeddingFactors(output, options.align.trunc_tol);
    LocalSearchResult refined =
        LocalSearch(result.matching, a, b, ta, tb, factors, options.refine_options);
    result.matching = std::move(refined.matching);
    refine_json = Json{{"sweeps", refined.sweeps}, {"swaps", refined.swaps}, {"knn", refined.knn}};
  }
  result.score = ScoreMatching(result.matching, a, b, ta, tb);
  if (result.score < result.before_refine) {
    throw InvariantViolation("refinement lowered the alignment score");
  }
  const double refine_seconds = Seconds(start);

  double contraction = 0.0;
  double rank_reveal = 0.0;
  double matching = 0.0;
  Json iterations = Json::array();
  for (const auto& it : output.iterations) {
    contraction += it.contraction_seconds;
    rank_reveal += it.rank_reveal_seconds;
    matching += it.matching_seconds;
    Json row{{"iteration", it.iteration}, {"lambda", it.lambda}, {"rank", it.rank}};
    row["motifs"] = it.motifs ? Json(*it.motifs) : Json(nullptr);
    if (options.method == Method::kLowRankTame) {
      row["accumulated"] = it.accumulated;
      row["fallback"] = !it.accumulated         ? Json(nullptr)
                        : it.implicit_fallback ? Json("implicit")
                                               : Json("accumulation");
      row["sigma_ratio"] = it.sigma_ratio;
    }
    row["contraction_seconds"] = it.contraction_seconds;
    row["rank_reveal_seconds"] = it.rank_reveal_seconds;
    row["matching_seconds"] = it.matching_seconds;
    iterations.push_back(std::move(row));
  }

  Json final_json = ScoreJson(result.score);
  final_json["matched"] = result.matching.size();
  const std::size_t max_motifs = std::min(ta.nnz(), tb.nnz());
  final_json["motif_match_rate"] =
      max_motifs == 0 ? 0.0 : static_cast<double>(result.score.motifs) / max_motifs;
  if (truth != nullptr) final_json["accuracy"] = Accuracy(result.matching, *truth);

  Json record;
  record["format_version"] = kRecordFormatVersion;
  record["kind"] = "align";
  record["method"] = MethodName(options.method);
  record["motif_order"] = order;
  record["requested_motif_order"] = options.motif_order;
  record["edge_fallback_used"] = fell_back;
  record["seed"] = options.seed;
  record["options"] = OptionsJson(options);
  record["graphs"] = Json{{"m", a.n()},
                          {"n", b.n()},
                          {"edges_a", a.edge_count()},
                          {"edges_b", b.edge_count()},
                          {"motifs_a", ta.nnz()},
                          {"motifs_b", tb.nnz()}};
  record["iterations"] = std::move(iterations);
  record["converged"] = output.converged;
  record["used_accumulation"] = output.used_accumulation;
  record["best_iteration"] = output.best_iteration;
  record["before_refine"] = ScoreJson(result.before_refine);
  record["refine"] = std::move(refine_json);
  record["final"] = std::move(final_json);
  record["timing"] = Json{{"motif_seconds", motif_seconds},
                          {"contraction_seconds", contraction},
                          {"rank_reveal_seconds", rank_reveal},
                          {"matching_seconds", matching},
                          {"refine_seconds", refine_seconds},
                          {"total_seconds", Seconds(total_start)}};
  result.record = std::move(record);
  return result;
}

}  // namespace kronalign
