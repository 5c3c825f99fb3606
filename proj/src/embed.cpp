#include "hdgl/embed.hpp"

#include <stdexcept>
#include <string>

namespace hdgl {

namespace {

void validate(const EmbedConfig& cfg) {
  if (cfg.hop1_budget % 2 == 0 || cfg.hop2_budget % 2 == 0)
    throw std::invalid_argument("embed: hop budgets must be odd");
}

// Bundles the sampled hop-k sketches of v, or returns v's own sketch when
// the neighborhood is empty.
Hypervector hop_bundle(std::span<const Hypervector> sketches,
                       const GraphStore& graph, NodeId v, int hop,
                       std::size_t budget, const EmbedConfig& cfg) {
  auto sample = graph.sample_neighbors(v, hop, budget, cfg.seed);
  if (sample.members.empty()) return sketches[v];
  BundleAccumulator acc(sketches[v].dim());
  for (NodeId j : sample.members) acc.add(sketches[j]);
  auto tie = cfg.tie.for_context({seed_tag::kBundleTie, v,
                                  static_cast<std::uint64_t>(hop)});
  return acc.majority(tie);
}

}  // namespace

Hypervector embed_node(std::span<const Hypervector> sketches,
                       const GraphStore& graph, NodeId v,
                       const EmbedConfig& cfg) {
  validate(cfg);
  if (v >= sketches.size())
    throw std::invalid_argument("embed_node: no sketch for node");
  auto b1 = hop_bundle(sketches, graph, v, 1, cfg.hop1_budget, cfg);
  auto b2 = hop_bundle(sketches, graph, v, 2, cfg.hop2_budget, cfg);
  return bind(sketches[v], bind(rotate(b1, cfg.rot1), rotate(b2, cfg.rot2)));
}

EmbeddingTable embed_all(std::span<const Hypervector> sketches,
                         const GraphStore& graph, const EmbedConfig& cfg) {
  validate(cfg);
  if (sketches.size() != graph.num_nodes())
    throw std::invalid_argument("embed_all: sketch table covers " +
                                std::to_string(sketches.size()) +
                                " nodes, graph has " +
                                std::to_string(graph.num_nodes()));
  EmbeddingTable table;
  table.dim = sketches.empty() ? 0 : sketches.front().dim();
  table.config = cfg;
  table.vectors.resize(sketches.size());
#pragma omp parallel for schedule(static)
  for (long long v = 0; v < static_cast<long long>(sketches.size()); ++v)
    table.vectors[v] =
        embed_node(sketches, graph, static_cast<NodeId>(v), cfg);
  return table;
}

}  // namespace hdgl
