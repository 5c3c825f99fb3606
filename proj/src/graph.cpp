#include "hdgl/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "hdgl/rng.hpp"

namespace hdgl {

GraphStore GraphStore::from_edges(std::size_t n_nodes,
                                  std::span<const Edge> edges) {
  GraphStore g;
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u >= n_nodes || v >= n_nodes)
      throw std::invalid_argument(
          "GraphStore: edge " + std::to_string(i) + " (" + std::to_string(u) +
          "," + std::to_string(v) + ") out of range for " +
          std::to_string(n_nodes) + " nodes");
    if (u == v) {
      ++g.self_loops_dropped_;
      continue;
    }
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()),
                 directed.end());

  g.offsets_.assign(n_nodes + 1, 0);
  for (const auto& [u, v] : directed) ++g.offsets_[u + 1];
  for (std::size_t i = 1; i <= n_nodes; ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.adjacency_.reserve(directed.size());
  for (const auto& [u, v] : directed) g.adjacency_.push_back(v);
  return g;
}

std::vector<NodeId> GraphStore::neighbors_k(NodeId v, int k) const {
  if (v >= num_nodes())
    throw std::invalid_argument("GraphStore::neighbors_k: node out of range");
  if (k != 1 && k != 2)
    throw std::invalid_argument("GraphStore::neighbors_k: k must be 1 or 2");
  auto direct = neighbors(v);
  if (k == 1) return {direct.begin(), direct.end()};
  std::vector<NodeId> multi;
  for (NodeId u : direct)
    for (NodeId w : neighbors(u))
      if (w != v) multi.push_back(w);
  return multi;
}

NeighborSample GraphStore::sample_neighbors(NodeId v, int k,
                                            std::size_t budget,
                                            std::uint64_t rng_key) const {
  if (budget % 2 == 0)
    throw std::invalid_argument(
        "GraphStore::sample_neighbors: budget must be odd, got " +
        std::to_string(budget));
  NeighborSample s;
  s.node = v;
  s.hop = k;
  s.requested = budget;
  s.members = neighbors_k(v, k);
  if (s.members.size() <= budget) return s;

  // Partial Fisher-Yates over the multiset, keyed per (rng_key, v, k) so
  // samples at different nodes and hops never interfere.
  RandomStream rng(derive_seed({rng_key, seed_tag::kNeighborSample, v,
                                static_cast<std::uint64_t>(k)}));
  for (std::size_t i = 0; i < budget; ++i) {
    std::size_t j = i + rng.next_below(s.members.size() - i);
    std::swap(s.members[i], s.members[j]);
  }
  s.members.resize(budget);
  return s;
}

bool GraphStore::has_edge(NodeId u, NodeId v) const {
  auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<Edge> GraphStore::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

}  // namespace hdgl
