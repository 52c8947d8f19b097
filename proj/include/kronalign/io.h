#ifndef KRONALIGN_IO_H_
#define KRONALIGN_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kronalign/graph.h"
#include "kronalign/matching.h"
#include "kronalign/motif_tensor.h"
#include "kronalign/synth.h"

namespace kronalign {

// All text formats use 1-based vertex ids.
//
// Edge list: one "u v" pair per line; '#' starts a comment. A comment line
// "# n N" declares N vertices, so isolated trailing vertices survive a round
// trip; otherwise n is the largest id seen. Duplicate and reversed pairs
// merge; self-loops are dropped with a warning.
Graph ReadEdgeList(std::istream& in, const std::string& name = "<stream>");
Graph LoadEdgeList(const std::string& path);
void WriteEdgeList(std::ostream& out, const Graph& graph);
void SaveEdgeList(const std::string& path, const Graph& graph);

// Tensor: header "k n nnz", then nnz lines of k strictly increasing ids and a
// weight.
MotifTensor ReadTensor(std::istream& in, const std::string& name = "<stream>");
MotifTensor LoadTensor(const std::string& path);
void WriteTensor(std::ostream& out, const MotifTensor& tensor);
void SaveTensor(const std::string& path, const MotifTensor& tensor);

// Truth permutation: "a_id b_id" per line, a_id = 1..N in order.
std::vector<int> ReadTruth(std::istream& in, const std::string& name = "<stream>");
std::vector<int> LoadTruth(const std::string& path);
void WriteTruth(std::ostream& out, const std::vector<int>& truth);
void SaveTruth(const std::string& path, const std::vector<int>& truth);

// Matching: header lines "# rows m cols n" and "# weight w", then "i j"
// pairs in row order.
Matching ReadMatching(std::istream& in, const std::string& name = "<stream>");
Matching LoadMatching(const std::string& path);
void WriteMatching(std::ostream& out, const Matching& matching);
void SaveMatching(const std::string& path, const Matching& matching);

using Json = nlohmann::ordered_json;

inline constexpr int kRecordFormatVersion = 1;

// Problem files: <prefix>a.el, <prefix>b.el, <prefix>truth.txt and
// <prefix>provenance.json.
Json ProblemProvenance(const AlignmentProblem& problem);
void SaveProblem(const std::string& prefix, const AlignmentProblem& problem);
AlignmentProblem LoadProblem(const std::string& prefix);

// JSON Lines: one compact record per line.
void AppendJsonLine(std::ostream& out, const Json& record);
std::vector<Json> ReadJsonLines(std::istream& in);
std::vector<Json> LoadJsonLines(const std::string& path);

// Copy of `record` without wall-clock fields (keys ending in "_seconds").
Json WithoutTimings(const Json& record);

}  // namespace kronalign

#endif  // KRONALIGN_IO_H_
