#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kronalign/errors.h"
#include "kronalign/io.h"
#include "kronalign/pipeline.h"
#include "kronalign/synth.h"
#include "kronalign/tensor_eigen.h"
#include "kronalign/util.h"

namespace fs = std::filesystem;
using namespace kronalign;

namespace {

// Writes through a temporary sibling so a failed run leaves nothing behind.
void WriteFileAtomically(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path() && !target.parent_path().empty()) {
    fs::create_directories(target.parent_path());
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw ParseError("failed writing '" + tmp + "'");
  }
  fs::rename(tmp, target);
}

std::string JsonLines(const std::vector<Json>& records) {
  std::ostringstream out;
  for (const auto& r : records) AppendJsonLine(out, r);
  return out.str();
}

std::optional<int> ParseKnn(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 1) {
    throw ContractViolation("--knn expects 'auto' or a positive integer");
  }
  return value;
}

std::vector<int> ParseIntList(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || value < 1) {
      throw ContractViolation(flag + " expects a comma-separated list of positive integers");
    }
    out.push_back(value);
  }
  if (out.empty()) throw ContractViolation(flag + " is empty");
  return out;
}

struct AlignFlags {
  std::string method = "lambda-tame";
  int motif = 3;
  double alpha = 0.5;
  double beta = 1.0;
  int iters = 15;
  double tol = 1e-6;
  std::string refine = "none";
  std::string knn = "auto";
  std::uint64_t seed = 0;
  std::size_t column_cap = kDefaultColumnCap;
  bool edge_fallback = false;

  void Register(CLI::App* app) {
    app->add_option("--motif", motif, "clique order k")->check(CLI::Range(2, 9));
    app->add_option("--alpha", alpha, "mixing parameter in (0, 1]");
    app->add_option("--beta", beta, "shift >= 0");
    app->add_option("--iters", iters, "iteration count")->check(CLI::NonNegativeNumber);
    app->add_option("--tol", tol, "stop when |delta lambda| < tol");
    app->add_option("--knn", knn, "embedding neighbors: auto or an integer");
    app->add_option("--column-cap", column_cap,
                    "low-rank column limit before the accumulation path");
    app->add_flag("--edge-fallback", edge_fallback,
                  "use edges with a warning when a graph has no k-cliques");
  }

  RunOptions ToRunOptions() const {
    RunOptions options;
    options.method = ParseMethod(method);
    options.motif_order = motif;
    options.align.alpha = alpha;
    options.align.beta = beta;
    options.align.max_iter = iters;
    options.align.tol = tol;
    options.align.column_cap = column_cap;
    options.refine = ParseRefinement(refine);
    options.refine_options.knn = ParseKnn(knn);
    options.seed = seed;
    options.edge_fallback = edge_fallback;
    return options;
  }
};

int CmdAlign(const std::string& graph_a, const std::string& graph_b,
             const std::string& truth_path, const std::string& out,
             const std::string& matching_out, const AlignFlags& flags) {
  const RunOptions options = flags.ToRunOptions();
  const Graph a = LoadEdgeList(graph_a);
  const Graph b = LoadEdgeList(graph_b);
  std::optional<std::vector<int>> truth;
  if (!truth_path.empty()) truth = LoadTruth(truth_path);
  RunResult result = RunAlignment(a, b, options, truth ? &*truth : nullptr);
  result.record["inputs"] = Json{{"graph_a", graph_a}, {"graph_b", graph_b}};
  if (!truth_path.empty()) result.record["inputs"]["truth"] = truth_path;

  const std::string matching_path = matching_out.empty() ? out + ".matching" : matching_out;
  std::ostringstream matching_text;
  WriteMatching(matching_text, result.matching);
  WriteFileAtomically(matching_path, matching_text.str());
  WriteFileAtomically(out, JsonLines({result.record}));
  std::printf("%s: motifs %zu, edges %zu", MethodName(options.method).c_str(),
              result.score.motifs, result.score.edges);
  if (truth) std::printf(", accuracy %.4f", result.record["final"]["accuracy"].get<double>());
  std::printf("\n");
  return 0;
}

int CmdEigcheck(const std::string& dims, const std::string& orders, int trials, int restarts,
                std::uint64_t seed, const std::string& out) {
  if (trials < 0) throw ContractViolation("--trials must be nonnegative");
  DecouplingGrid grid;
  grid.dims = ParseIntList(dims, "--dims");
  grid.orders = ParseIntList(orders, "--orders");
  DominantOptions options;
  options.restarts = restarts;
  options.seed = seed;
  const auto reports = RunDecouplingTrials(grid, trials, seed, options);
  std::vector<Json> records;
  double max_eig = 0.0;
  double max_vec = 0.0;
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const auto& r = reports[t];
    max_eig = std::max(max_eig, r.eig_gap);
    max_vec = std::max(max_vec, r.vec_gap);
    records.push_back(Json{{"format_version", kRecordFormatVersion},
                           {"kind", "eigcheck"},
                           {"trial", t},
                           {"seed", seed},
                           {"restarts", restarts},
                           {"m", r.m},
                           {"n", r.n},
                           {"order", r.order},
                           {"lambda_a", r.lambda_a},
                           {"lambda_b", r.lambda_b},
                           {"lambda_kron", r.lambda_kron},
                           {"eig_gap", r.eig_gap},
                           {"vec_gap", r.vec_gap},
                           {"residual_a", r.residual_a},
                           {"residual_b", r.residual_b},
                           {"residual_kron", r.residual_kron}});
  }
  WriteFileAtomically(out, JsonLines(records));
  std::printf("%zu trials, max eig_gap %.3e, max vec_gap %.3e\n", reports.size(), max_eig,
              max_vec);
  return 0;
}

int CmdSynth(int n, const std::string& model_name, const NoiseParams& params, int trials,
             std::uint64_t seed, const std::string& run, const std::string& dir,
             const std::string& out, AlignFlags flags) {
  if (trials < 0) throw ContractViolation("--trials must be nonnegative");
  if (n < 2) throw ContractViolation("--n must be at least 2");
  const NoiseModel model = ParseModel(model_name);
  if (model == NoiseModel::kEr && !(params.p >= 0.0 && params.p <= 1.0)) {
    throw ContractViolation("--p must lie in [0, 1]");
  }
  if (model == NoiseModel::kDuplication &&
      (!(params.frac >= 0.0) || !(params.p_edge >= 0.0 && params.p_edge <= 1.0))) {
    throw ContractViolation("--frac must be >= 0 and --pedge in [0, 1]");
  }
  std::optional<RunOptions> run_options;
  if (!run.empty()) {
    const auto plus = run.find('+');
    flags.method = run.substr(0, plus);
    flags.refine = plus == std::string::npos ? "none" : run.substr(plus + 1);
    run_options = flags.ToRunOptions();
  }

  const std::size_t count = static_cast<std::size_t>(trials);
  std::vector<AlignmentProblem> problems(count);
  std::vector<Json> records(count);
  ParallelFor(count, [&](std::size_t t) {
    problems[t] = MakeProblem(n, model, params, DeriveSeed(seed, t));
    if (run_options) {
      RunOptions options = *run_options;
      options.seed = problems[t].seed;
      RunResult result = RunAlignment(problems[t].a, problems[t].b, options, &problems[t].truth);
      result.record["trial"] = t;
      result.record["problem"] = ProblemProvenance(problems[t]);
      records[t] = std::move(result.record);
    }
  });

  fs::create_directories(dir);
  for (std::size_t t = 0; t < count; ++t) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "trial_%04zu_", t);
    SaveProblem((fs::path(dir) / prefix).string(), problems[t]);
  }
  if (run_options) WriteFileAtomically(out.empty() ? (fs::path(dir) / "runs.jsonl").string() : out,
                                       JsonLines(records));
  std::printf("%zu problems written to %s\n", count, dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motif-based network alignment with tensor Kronecker products"};
  app.require_subcommand(1);

  std::string graph_a;
  std::string graph_b;
  std::string truth_path;
  std::string align_out;
  std::string matching_out;
  AlignFlags align_flags;
  auto* align = app.add_subcommand("align", "align two graphs");
  align->add_option("--graph-a", graph_a, "edge list of A")->required();
  align->add_option("--graph-b", graph_b, "edge list of B")->required();
  align->add_option("--method", align_flags.method, "tame, lowrank-tame or lambda-tame")
      ->check(CLI::IsMember({"tame", "lowrank-tame", "lambda-tame"}));
  align->add_option("--refine", align_flags.refine, "none or local-search")
      ->check(CLI::IsMember({"none", "local-search"}));
  align->add_option("--seed", align_flags.seed, "seed recorded with the run");
  align->add_option("--truth", truth_path, "truth permutation file");
  align->add_option("--out", align_out, "RunRecord output (JSON Lines)")->required();
  align->add_option("--matching", matching_out, "matching output (default <out>.matching)");
  align_flags.Register(align);

  std::string dims = "2,3,4";
  std::string orders = "3,4,5";
  int eig_trials = 30;
  int restarts = 5000;
  std::uint64_t eig_seed = 1;
  std::string eig_out = "eigcheck.jsonl";
  auto* eig = app.add_subcommand("eigcheck", "check dominant-pair decoupling on random tensors");
  eig->add_option("--dims", dims, "candidate dimensions, comma-separated");
  eig->add_option("--orders", orders, "candidate orders, comma-separated");
  eig->add_option("--trials", eig_trials, "number of trials");
  eig->add_option("--restarts", restarts, "SS-HOPM restarts per tensor")
      ->check(CLI::PositiveNumber);
  eig->add_option("--seed", eig_seed, "seed");
  eig->add_option("--out", eig_out, "report output (JSON Lines)");

  int synth_n = 100;
  std::string model = "er";
  NoiseParams params;
  int synth_trials = 1;
  std::uint64_t synth_seed = 1;
  std::string run;
  std::string synth_dir = "synth";
  std::string synth_out;
  AlignFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "generate synthetic alignment problems");
  synth->add_option("--n", synth_n, "reference graph size");
  synth->add_option("--model", model, "er or duplication")
      ->check(CLI::IsMember({"er", "duplication"}));
  synth->add_option("--p", params.p, "ER edge-flip probability");
  synth->add_option("--frac", params.frac, "fraction of duplicated vertices");
  synth->add_option("--pedge", params.p_edge, "edge retention of duplicates");
  synth->add_option("--trials", synth_trials, "number of problems");
  synth->add_option("--seed", synth_seed, "seed");
  synth->add_option("--run", run, "method to run on each problem, e.g. lambda-tame+local-search");
  synth->add_option("--dir", synth_dir, "problem output directory");
  synth->add_option("--out", synth_out, "RunRecord output (default <dir>/runs.jsonl)");
  synth_flags.Register(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*align) {
      return CmdAlign(graph_a, graph_b, truth_path, align_out, matching_out, align_flags);
    }
    if (*eig) return CmdEigcheck(dims, orders, eig_trials, restarts, eig_seed, eig_out);
    if (*synth) {
      return CmdSynth(synth_n, model, params, synth_trials, synth_seed, run, synth_dir, synth_out,
                      synth_flags);
    }
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
