#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hdgl/graph.hpp"
#include "hdgl/hypervector.hpp"

namespace hdgl {

// Neighborhood aggregation parameters. The rotation amounts exist so tests
// can switch rotations off; production use keeps (1, 2).
struct EmbedConfig {
  std::size_t hop1_budget = 11;  // odd
  std::size_t hop2_budget = 21;  // odd
  std::size_t rot1 = 1;
  std::size_t rot2 = 2;
  std::uint64_t seed = 0;
  TieBreakPolicy tie = TieBreakPolicy::seeded(0);
};

// One latent hypervector per node plus the configuration that produced it.
struct EmbeddingTable {
  std::size_t dim = 0;
  EmbedConfig config;
  std::vector<Hypervector> vectors;

  std::size_t num_nodes() const { return vectors.size(); }
  const Hypervector& operator[](std::size_t v) const { return vectors[v]; }
};

// Latent representation of node v: its sketch bound with the once-rotated
// bundle of sampled 1-hop sketches and the twice-rotated bundle of sampled
// 2-hop sketches. Empty neighborhoods fall back to the node's own sketch at
// that slot.
Hypervector embed_node(std::span<const Hypervector> sketches,
                       const GraphStore& graph, NodeId v,
                       const EmbedConfig& cfg);

EmbeddingTable embed_all(std::span<const Hypervector> sketches,
                         const GraphStore& graph, const EmbedConfig& cfg);

}  // namespace hdgl
