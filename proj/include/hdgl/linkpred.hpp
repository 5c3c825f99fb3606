#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hdgl/embed.hpp"
#include "hdgl/graph.hpp"
#include "hdgl/hypervector.hpp"

namespace hdgl {

// Majority bundles of pairwise bindings over observed edges (e_plus) and
// sampled non-edges (e_minus).
struct EdgeMemory {
  std::size_t dim = 0;
  Hypervector e_plus;
  Hypervector e_minus;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
};

struct PairScores {
  std::vector<Edge> pairs;
  std::vector<double> d_plus;
  std::vector<double> d_minus;
  std::vector<double> a_hat;
};

EdgeMemory build_edge_memory(const EmbeddingTable& embeddings,
                             std::span<const Edge> pos_edges,
                             std::span<const Edge> neg_edges,
                             const TieBreakPolicy& tie);

// Per pair (u, v): d_plus = d_H(z_u xor e_plus, z_v), d_minus likewise with
// e_minus, then
//   a_hat = sigmoid((1 - d_plus) + d_minus)   if d_plus < d_minus
//   a_hat = sigmoid(d_plus - (1 - d_minus))   otherwise.
// Binding commutes, so each score is symmetric in (u, v) as computed.
PairScores score_pairs(const EmbeddingTable& embeddings, const EdgeMemory& em,
                       std::span<const Edge> pairs);

double sigmoid(double x);
double pair_a_hat(double d_plus, double d_minus);

// Row-major N x N matrix of a_hat values. Guarded: refuses when N * N
// exceeds `max_cells` so callers opt in to the quadratic materialization.
std::vector<double> full_adjacency(const EmbeddingTable& embeddings,
                                   const EdgeMemory& em,
                                   std::size_t max_cells = 1u << 22);

// Probability that a random positive outscores a random negative; ties
// count one half.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

// Area under precision-recall with step interpolation over descending
// scores; tied scores form one threshold block.
double average_precision(std::span<const double> scores,
                         std::span<const int> labels);

// Uniform sample of `count` distinct non-edges (u < v), avoiding every pair
// present in `exclude` (treated symmetrically) and all graph edges.
std::vector<Edge> sample_non_edges(const GraphStore& graph, std::size_t count,
                                   std::span<const Edge> exclude,
                                   std::uint64_t seed);

}  // namespace hdgl
