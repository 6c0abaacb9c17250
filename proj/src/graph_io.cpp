#include "contagion/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "contagion/error.hpp"

namespace contagion {
namespace {

std::string_view StripComment(std::string_view line) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitFields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Non-negative decimal integer; anything else is a parse error.
std::int64_t ParseCount(std::string_view field, const std::string& source, std::size_t line) {
  if (!field.empty() && field.front() == '-') {
    throw ParseError(source, line, "negative value '" + std::string(field) + "'");
  }
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(source, line, "expected a non-negative integer, got '" + std::string(field) + "'");
  }
  return value;
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

Graph ParseEdgeList(std::istream& in, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool directed = false;
  std::int64_t declared_n = -1;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::int64_t max_id = -1;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = StripComment(raw);
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (!have_header) {
      if (fields[0] == "directed") {
        directed = true;
      } else if (fields[0] != "undirected") {
        throw ParseError(source, line_no, "expected 'directed' or 'undirected' header");
      }
      if (fields.size() > 2) throw ParseError(source, line_no, "unexpected fields after header");
      if (fields.size() == 2) declared_n = ParseCount(fields[1], source, line_no);
      have_header = true;
      continue;
    }
    if (fields.size() != 2) throw ParseError(source, line_no, "expected 'u v'");
    const auto u = ParseCount(fields[0], source, line_no);
    const auto v = ParseCount(fields[1], source, line_no);
    if (u > std::numeric_limits<NodeId>::max() || v > std::numeric_limits<NodeId>::max()) {
      throw ParseError(source, line_no, "node id too large");
    }
    if (u == v) throw ParseError(source, line_no, "self-loop");
    if (!directed && u > v) throw ParseError(source, line_no, "undirected edges must have u < v");
    if (declared_n >= 0 && (u >= declared_n || v >= declared_n)) {
      throw ParseError(source, line_no, "node id exceeds declared node count");
    }
    const Edge e{static_cast<NodeId>(u), static_cast<NodeId>(v)};
    if (!seen.insert(e).second) throw ParseError(source, line_no, "duplicate edge");
    edges.push_back(e);
    max_id = std::max({max_id, u, v});
  }
  if (!have_header) throw ParseError(source, line_no, "missing 'directed'/'undirected' header");
  const auto n = declared_n >= 0 ? declared_n : max_id + 1;
  return Graph(static_cast<std::size_t>(n), directed, std::move(edges));
}

Graph ReadEdgeList(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseEdgeList(in, path.string());
}

void WriteEdgeList(const Graph& g, std::ostream& out) {
  out << (g.directed() ? "directed " : "undirected ") << g.num_nodes() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void WriteEdgeList(const Graph& g, const std::filesystem::path& path) {
  std::ostringstream out;
  WriteEdgeList(g, out);
  WriteFileAtomically(path, out.str());
}

DegreeDistribution ParseDegreeHistogram(std::istream& in, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  std::map<std::int64_t, std::int64_t> counts;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = StripComment(raw);
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (fields.size() != 2) throw ParseError(source, line_no, "expected 'k count'");
    const auto k = ParseCount(fields[0], source, line_no);
    const auto c = ParseCount(fields[1], source, line_no);
    if (!counts.emplace(k, c).second) {
      throw ParseError(source, line_no, "duplicate degree " + std::to_string(k));
    }
  }
  return DegreeDistribution(std::move(counts));
}

DegreeDistribution ReadDegreeHistogram(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseDegreeHistogram(in, path.string());
}

void WriteDegreeHistogram(const DegreeDistribution& d, std::ostream& out) {
  for (const auto& [k, c] : d.counts()) out << k << ' ' << c << '\n';
}

void WriteFileAtomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace contagion
