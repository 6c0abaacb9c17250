#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "contagion/degree_distribution.hpp"
#include "contagion/graph.hpp"

namespace contagion {

// Edge-list files:
//
//   # comment
//   undirected 5        <- `directed` or `undirected`, optional node count
//   0 1
//   1 2
//
// Without a node count, n is one past the largest id seen. Undirected files
// list each edge once with u < v. Errors throw ParseError with the line.

Graph ParseEdgeList(std::istream& in, const std::string& source = "<stream>");
Graph ReadEdgeList(const std::filesystem::path& path);
void WriteEdgeList(const Graph& g, std::ostream& out);
void WriteEdgeList(const Graph& g, const std::filesystem::path& path);

// Degree-histogram files: `k count` per line, `#` comments.

DegreeDistribution ParseDegreeHistogram(std::istream& in, const std::string& source = "<stream>");
DegreeDistribution ReadDegreeHistogram(const std::filesystem::path& path);
void WriteDegreeHistogram(const DegreeDistribution& d, std::ostream& out);

/// Writes to a sibling temporary file and renames it into place, so readers
/// never observe a partially written file.
void WriteFileAtomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace contagion
