#include <filesystem>
#include <fstream>
#include <sstream>

#include "contagion/degree_distribution.hpp"
#include "contagion/error.hpp"
#include "contagion/generators.hpp"
#include "contagion/graph_io.hpp"
#include "doctest.h"

using namespace contagion;

namespace {

std::size_t EdgeListErrorLine(const std::string& text) {
  std::istringstream in(text);
  try {
    ParseEdgeList(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::size_t HistogramErrorLine(const std::string& text) {
  std::istringstream in(text);
  try {
    ParseDegreeHistogram(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("edge list parsing") {
  std::istringstream in("# comment\nundirected\n0 1   # trailing\n\n1 2\n");
  const Graph g = ParseEdgeList(in);
  CHECK_FALSE(g.directed());
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);

  std::istringstream with_n("directed 5\n1 0\n0 1\n");
  const Graph d = ParseEdgeList(with_n);
  CHECK(d.directed());
  CHECK(d.num_nodes() == 5);
  CHECK(d.has_edge(1, 0));
}

TEST_CASE("edge list errors name the line") {
  CHECK(EdgeListErrorLine("undirected\n0 1\n0 1\n") == 3);
  CHECK(EdgeListErrorLine("undirected\n0 1\n2 2\n") == 3);
  CHECK(EdgeListErrorLine("undirected\n1 0\n") == 2);
  CHECK(EdgeListErrorLine("undirected\n0 -1\n") == 2);
  CHECK(EdgeListErrorLine("undirected\n0 x\n") == 2);
  CHECK(EdgeListErrorLine("undirected\n0 1 2\n") == 2);
  CHECK(EdgeListErrorLine("graph\n0 1\n") == 1);
  CHECK(EdgeListErrorLine("undirected 2\n0 2\n") == 2);
  CHECK(EdgeListErrorLine("directed\n0 1\n1 0\n") == 0);
}

TEST_CASE("edge list write then read is the identity") {
  NetworkSpec spec;
  spec.family = Family::PowerLaw;
  spec.n = 500;
  spec.alpha = 2.3;
  spec.k_max = 40;
  spec.seed = 8;
  for (bool directed : {false, true}) {
    spec.directed = directed;
    const Graph g = Generate(spec);
    std::ostringstream out;
    WriteEdgeList(g, out);
    std::istringstream in(out.str());
    const Graph back = ParseEdgeList(in);
    CHECK(back == g);
    std::ostringstream again;
    WriteEdgeList(back, again);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("isolated trailing nodes survive a round trip") {
  const Graph g(6, false, {{0, 1}});
  std::ostringstream out;
  WriteEdgeList(g, out);
  std::istringstream in(out.str());
  CHECK(ParseEdgeList(in).num_nodes() == 6);
}

TEST_CASE("degree histogram parsing") {
  std::istringstream in("# k count\n1 10\n3 5\n0 2\n");
  const auto d = ParseDegreeHistogram(in);
  CHECK(d.num_nodes() == 17);
  CHECK(d.count(3) == 5);
  CHECK(d.count(2) == 0);

  std::ostringstream out;
  WriteDegreeHistogram(d, out);
  std::istringstream back(out.str());
  CHECK(ParseDegreeHistogram(back) == d);

  CHECK(HistogramErrorLine("1 10\n1 3\n") == 2);
  CHECK(HistogramErrorLine("1 10\n2 -3\n") == 2);
  CHECK(HistogramErrorLine("1\n") == 1);
  CHECK(HistogramErrorLine("1 2\n\n# c\nx 1\n") == 4);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "contagion_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "g.txt";
  const Graph g = BuildComplete(5);
  WriteEdgeList(g, path);
  CHECK(ReadEdgeList(path) == g);
  CHECK_FALSE(std::filesystem::exists(dir / "g.txt.tmp"));
  CHECK_THROWS(ReadEdgeList(dir / "missing.txt"));
  CHECK_THROWS(ReadDegreeHistogram(dir / "missing.txt"));
  std::filesystem::remove_all(dir);
}
