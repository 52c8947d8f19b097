#include "kronalign/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "kronalign/errors.h"
#include "kronalign/util.h"

namespace kronalign {

namespace {

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

void CheckWritten(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw ParseError("failed writing '" + path + "'");
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  // Next line with comments removed and the raw comment text kept separately.
  bool Next(std::vector<std::string>& tokens, std::string& comment) {
    std::string line;
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    comment.clear();
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      comment = line.substr(hash + 1);
      line.resize(hash);
    }
    tokens.clear();
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return true;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(name_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  long long Int(const std::string& tok) const {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) Fail("expected an integer, got '" + tok + "'");
    return value;
  }

  int VertexId(const std::string& tok) const {
    const long long v = Int(tok);
    if (v < 1 || v > std::numeric_limits<int>::max()) Fail("vertex id out of range: " + tok);
    return static_cast<int>(v - 1);
  }

  double Real(const std::string& tok) const {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      Fail("expected a number, got '" + tok + "'");
    }
    if (used != tok.size()) Fail("expected a number, got '" + tok + "'");
    return value;
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  std::string name_;
  int line_no_ = 0;
};

}  // namespace

Graph ReadEdgeList(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  std::vector<std::string> tokens;
  std::string comment;
  std::vector<std::pair<int, int>> edges;
  int declared = 0;
  int max_id = -1;
  std::size_t loops = 0;
  while (reader.Next(tokens, comment)) {
    if (!comment.empty()) {
      std::istringstream ss(comment);
      std::string key;
      std::string value;
      if (ss >> key && key == "n" && ss >> value && !(ss >> key)) {
        const long long n = reader.Int(value);
        if (n < 0 || n > std::numeric_limits<int>::max()) reader.Fail("bad vertex count");
        declared = static_cast<int>(n);
      }
    }
    if (tokens.empty()) continue;
    if (tokens.size() != 2) reader.Fail("expected 'u v'");
    const int u = reader.VertexId(tokens[0]);
    const int v = reader.VertexId(tokens[1]);
    max_id = std::max({max_id, u, v});
    if (u == v) {
      ++loops;
      continue;
    }
    edges.emplace_back(u, v);
  }
  if (loops > 0) Warn(name + ": dropped " + std::to_string(loops) + " self-loop(s)");
  if (declared > 0 && max_id >= declared) {
    throw ParseError(name + ": vertex id " + std::to_string(max_id + 1) +
                     " exceeds declared count " + std::to_string(declared));
  }
  return Graph(std::max(declared, max_id + 1), edges);
}

Graph LoadEdgeList(const std::string& path) {
  auto in = OpenIn(path);
  return ReadEdgeList(in, path);
}

void WriteEdgeList(std::ostream& out, const Graph& graph) {
  out << "# n " << graph.n() << "\n";
  for (auto [u, v] : graph.Edges()) out << u + 1 << " " << v + 1 << "\n";
}

void SaveEdgeList(const std::string& path, const Graph& graph) {
  auto out = OpenOut(path);
  WriteEdgeList(out, graph);
  CheckWritten(out, path);
}

MotifTensor ReadTensor(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  std::vector<std::string> tokens;
  std::string comment;
  long long k = -1;
  long long n = -1;
  long long nnz = -1;
  std::vector<std::vector<int>> hyperedges;
  std::vector<double> weights;
  while (reader.Next(tokens, comment)) {
    if (tokens.empty()) continue;
    if (k < 0) {
      if (tokens.size() != 3) reader.Fail("expected header 'k n nnz'");
      k = reader.Int(tokens[0]);
      n = reader.Int(tokens[1]);
      nnz = reader.Int(tokens[2]);
      if (k < 1 || n < 1 || nnz < 0 || k > 64 || n > std::numeric_limits<int>::max()) {
        reader.Fail("invalid header");
      }
      continue;
    }
    if (static_cast<long long>(tokens.size()) != k + 1) {
      reader.Fail("expected " + std::to_string(k) + " ids and a weight");
    }
    std::vector<int> edge(k);
    for (long long t = 0; t < k; ++t) {
      edge[t] = reader.VertexId(tokens[t]);
      if (edge[t] >= n) reader.Fail("vertex id exceeds dimension");
      if (t > 0 && edge[t] <= edge[t - 1]) reader.Fail("ids must be strictly increasing");
    }
    const double w = reader.Real(tokens[k]);
    if (!(w > 0.0) || !std::isfinite(w)) reader.Fail("weight must be positive");
    hyperedges.push_back(std::move(edge));
    weights.push_back(w);
  }
  if (k < 0) throw ParseError(name + ": missing header");
  if (static_cast<long long>(weights.size()) != nnz) {
    throw ParseError(name + ": header declares " + std::to_string(nnz) + " hyperedges, found " +
                     std::to_string(weights.size()));
  }
  try {
    return MotifTensor(static_cast<int>(k), static_cast<int>(n), std::move(hyperedges),
                       std::move(weights));
  } catch (const ContractViolation& e) {
    throw ParseError(name + ": " + e.what());
  }
}

MotifTensor LoadTensor(const std::string& path) {
  auto in = OpenIn(path);
  return ReadTensor(in, path);
}

void WriteTensor(std::ostream& out, const MotifTensor& tensor) {
  const auto precision = out.precision(17);
  out << tensor.order() << " " << tensor.dim() << " " << tensor.nnz() << "\n";
  for (std::size_t e = 0; e < tensor.nnz(); ++e) {
    for (int v : tensor.hyperedge(e)) out << v + 1 << " ";
    out << tensor.weight(e) << "\n";
  }
  out.precision(precision);
}

void SaveTensor(const std::string& path, const MotifTensor& tensor) {
  auto out = OpenOut(path);
  WriteTensor(out, tensor);
  CheckWritten(out, path);
}

std::vector<int> ReadTruth(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  std::vector<std::string> tokens;
  std::string comment;
  std::vector<int> truth;
  while (reader.Next(tokens, comment)) {
    if (tokens.empty()) continue;
    if (tokens.size() != 2) reader.Fail("expected 'a_id b_id'");
    const int a = reader.VertexId(tokens[0]);
    if (a != static_cast<int>(truth.size())) reader.Fail("A ids must be 1..N in order");
    truth.push_back(reader.VertexId(tokens[1]));
  }
  std::vector<int> sorted = truth;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParseError(name + ": truth mapping is not injective");
  }
  return truth;
}

std::vector<int> LoadTruth(const std::string& path) {
  auto in = OpenIn(path);
  return ReadTruth(in, path);
}

void WriteTruth(std::ostream& out, const std::vector<int>& truth) {
  for (std::size_t i = 0; i < truth.size(); ++i) out << i + 1 << " " << truth[i] + 1 << "\n";
}

void SaveTruth(const std::string& path, const std::vector<int>& truth) {
  auto out = OpenOut(path);
  WriteTruth(out, truth);
  CheckWritten(out, path);
}

Matching ReadMatching(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  std::vector<std::string> tokens;
  std::string comment;
  int rows = -1;
  int cols = -1;
  double weight = 0.0;
  bool have_weight = false;
  Matching matching;
  while (reader.Next(tokens, comment)) {
    if (!comment.empty() && tokens.empty()) {
      std::istringstream ss(comment);
      std::string key;
      std::string value;
      ss >> key;
      if (key == "rows") {
        std::string cols_key;
        std::string cols_value;
        if (!(ss >> value >> cols_key >> cols_value) || cols_key != "cols") {
          reader.Fail("expected '# rows m cols n'");
        }
        rows = static_cast<int>(reader.Int(value));
        cols = static_cast<int>(reader.Int(cols_value));
        if (rows < 0 || cols < 0) reader.Fail("negative size");
        matching = Matching(rows, cols);
      } else if (key == "weight") {
        if (!(ss >> value)) reader.Fail("expected '# weight w'");
        weight = reader.Real(value);
        have_weight = true;
      }
      continue;
    }
    if (tokens.empty()) continue;
    if (rows < 0) reader.Fail("pair before the '# rows m cols n' header");
    if (tokens.size() != 2) reader.Fail("expected 'i j'");
    const int i = reader.VertexId(tokens[0]);
    const int j = reader.VertexId(tokens[1]);
    if (i >= rows || j >= cols) reader.Fail("pair out of range");
    if (matching.row_to_col[i] >= 0 || matching.col_to_row[j] >= 0) {
      reader.Fail("vertex matched twice");
    }
    matching.Add(i, j);
  }
  if (rows < 0) throw ParseError(name + ": missing '# rows m cols n' header");
  if (!have_weight) throw ParseError(name + ": missing '# weight w' header");
  matching.weight = weight;
  return matching;
}

Matching LoadMatching(const std::string& path) {
  auto in = OpenIn(path);
  return ReadMatching(in, path);
}

void WriteMatching(std::ostream& out, const Matching& matching) {
  const auto precision = out.precision(17);
  out << "# rows " << matching.rows() << " cols " << matching.cols() << "\n";
  out << "# weight " << matching.weight << "\n";
  for (auto [i, j] : matching.Pairs()) out << i + 1 << " " << j + 1 << "\n";
  out.precision(precision);
}

void SaveMatching(const std::string& path, const Matching& matching) {
  auto out = OpenOut(path);
  WriteMatching(out, matching);
  CheckWritten(out, path);
}

Json ProblemProvenance(const AlignmentProblem& problem) {
  Json params;
  if (problem.model == "er") {
    params["p"] = problem.params.p;
  } else {
    params["frac"] = problem.params.frac;
    params["p_edge"] = problem.params.p_edge;
  }
  return Json{{"format_version", kRecordFormatVersion},
              {"reference", "rgg"},
              {"model", problem.model},
              {"n", problem.n},
              {"params", params},
              {"seed", problem.seed}};
}

void SaveProblem(const std::string& prefix, const AlignmentProblem& problem) {
  SaveEdgeList(prefix + "a.el", problem.a);
  SaveEdgeList(prefix + "b.el", problem.b);
  SaveTruth(prefix + "truth.txt", problem.truth);
  auto out = OpenOut(prefix + "provenance.json");
  out << ProblemProvenance(problem).dump(2) << "\n";
  CheckWritten(out, prefix + "provenance.json");
}

AlignmentProblem LoadProblem(const std::string& prefix) {
  AlignmentProblem problem;
  problem.a = LoadEdgeList(prefix + "a.el");
  problem.b = LoadEdgeList(prefix + "b.el");
  problem.truth = LoadTruth(prefix + "truth.txt");
  auto in = OpenIn(prefix + "provenance.json");
  Json prov;
  try {
    in >> prov;
    problem.model = prov.at("model").get<std::string>();
    problem.n = prov.at("n").get<int>();
    problem.seed = prov.at("seed").get<std::uint64_t>();
    const auto& params = prov.at("params");
    if (problem.model == "er") {
      problem.params.p = params.at("p").get<double>();
    } else {
      problem.params.frac = params.at("frac").get<double>();
      problem.params.p_edge = params.at("p_edge").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(prefix + "provenance.json: " + e.what());
  }
  return problem;
}

void AppendJsonLine(std::ostream& out, const Json& record) { out << record.dump() << "\n"; }

std::vector<Json> ReadJsonLines(std::istream& in) {
  std::vector<Json> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("record line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<Json> LoadJsonLines(const std::string& path) {
  auto in = OpenIn(path);
  return ReadJsonLines(in);
}

Json WithoutTimings(const Json& record) {
  if (record.is_object()) {
    Json out = Json::object();
    for (auto it = record.begin(); it != record.end(); ++it) {
      const std::string& key = it.key();
      if (key.size() >= 8 && key.compare(key.size() - 8, 8, "_seconds") == 0) continue;
      out[key] = WithoutTimings(it.value());
    }
    return out;
  }
  if (record.is_array()) {
    Json out = Json::array();
    for (const auto& item : record) out.push_back(WithoutTimings(item));
    return out;
  }
  return record;
}

}  // namespace kronalign
