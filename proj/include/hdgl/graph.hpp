#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hdgl {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

struct NeighborSample {
  NodeId node = 0;
  int hop = 1;
  std::size_t requested = 0;
  std::vector<NodeId> members;  // multiset, min(budget, multiset size) items
};

// Undirected graph in compressed adjacency form. Neighbor lists are sorted
// and deduplicated; self-loops are dropped at construction (counted).
class GraphStore {
 public:
  GraphStore() = default;

  static GraphStore from_edges(std::size_t n_nodes,
                               std::span<const Edge> edges);

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_edges() const { return adjacency_.size() / 2; }
  std::size_t self_loops_dropped() const { return self_loops_dropped_; }

  std::size_t degree(NodeId v) const {
    return offsets_[v + 1] - offsets_[v];
  }
  std::span<const NodeId> neighbors(NodeId v) const {
    return std::span<const NodeId>(adjacency_)
        .subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }

  // k = 1: adj(v). k = 2: multiset of all length-2 walk endpoints from v
  // with occurrences of v removed; a node reachable through two distinct
  // intermediates appears twice.
  std::vector<NodeId> neighbors_k(NodeId v, int k) const;

  // Uniform sample without replacement of `budget` elements from the hop-k
  // multiset, or the whole multiset when it is smaller. Deterministic per
  // (rng_key, v, k); budget must be odd.
  NeighborSample sample_neighbors(NodeId v, int k, std::size_t budget,
                                  std::uint64_t rng_key) const;

  bool has_edge(NodeId u, NodeId v) const;

  // All undirected edges as (u < v) pairs in sorted order.
  std::vector<Edge> edge_list() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::size_t self_loops_dropped_ = 0;
};

}  // namespace hdgl
