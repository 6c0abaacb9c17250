#include "contagion/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace contagion {
namespace {

void BuildCsr(std::size_t n, const std::vector<Edge>& arcs,
              std::vector<std::size_t>& offsets, std::vector<NodeId>& targets) {
  offsets.assign(n + 1, 0);
  for (const auto& [u, v] : arcs) ++offsets[u + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  targets.resize(arcs.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : arcs) targets[cursor[u]++] = v;
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
  }
}

}  // namespace

Graph::Graph(std::size_t n, bool directed, std::vector<Edge> edges)
    : n_(n), directed_(directed), edges_(std::move(edges)) {
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
        static_cast<std::size_t>(v) >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ") out of range for n=" +
                                  std::to_string(n));
    }
    if (u == v) {
      throw std::invalid_argument("self-loop at node " + std::to_string(u));
    }
    if (!directed && u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  const auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw std::invalid_argument("duplicate edge (" + std::to_string(dup->first) +
                                ", " + std::to_string(dup->second) + ")");
  }

  if (directed_) {
    BuildCsr(n_, edges_, out_offsets_, out_targets_);
    std::vector<Edge> reversed;
    reversed.reserve(edges_.size());
    for (const auto& [u, v] : edges_) reversed.emplace_back(v, u);
    BuildCsr(n_, reversed, in_offsets_, in_targets_);
  } else {
    std::vector<Edge> both;
    both.reserve(2 * edges_.size());
    for (const auto& [u, v] : edges_) {
      both.emplace_back(u, v);
      both.emplace_back(v, u);
    }
    BuildCsr(n_, both, out_offsets_, out_targets_);
  }
}

std::span<const NodeId> Graph::in_neighbors(NodeId u) const {
  if (!directed_) return out_neighbors(u);
  return {in_targets_.data() + in_offsets_[u],
          in_targets_.data() + in_offsets_[u + 1]};
}

std::size_t Graph::in_degree(NodeId u) const {
  if (!directed_) return out_degree(u);
  return in_offsets_[u + 1] - in_offsets_[u];
}

std::size_t Graph::degree(NodeId u) const {
  return directed_ ? in_degree(u) + out_degree(u) : out_degree(u);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nbrs = out_neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

}  // namespace contagion
