#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace contagion {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable simple graph over dense node ids 0..n-1.
///
/// Undirected edges are stored once as (min, max); directed edges as
/// (source, target). The edge list is kept sorted, so two graphs with the
/// same edge set compare equal regardless of construction order. Adjacency
/// is held in CSR form for both directions.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an edge list in any order. Undirected pairs may be
  /// given in either orientation. Throws std::invalid_argument on
  /// out-of-range ids, self-loops or duplicate edges.
  Graph(std::size_t n, bool directed, std::vector<Edge> edges);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  bool directed() const { return directed_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Targets reachable in one hop. For undirected graphs this is the full
  /// neighbourhood.
  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {out_targets_.data() + out_offsets_[u],
            out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId u) const;

  std::size_t out_degree(NodeId u) const {
    return out_offsets_[u + 1] - out_offsets_[u];
  }
  std::size_t in_degree(NodeId u) const;
  /// in + out for directed graphs, the plain degree otherwise.
  std::size_t degree(NodeId u) const;

  bool has_edge(NodeId u, NodeId v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_targets_;
};

}  // namespace contagion
