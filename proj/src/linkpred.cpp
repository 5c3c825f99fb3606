#include "hdgl/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace hdgl {

namespace {

void check_pairs(const EmbeddingTable& embeddings, std::span<const Edge> pairs,
                 const char* who) {
  for (const auto& [u, v] : pairs)
    if (u >= embeddings.num_nodes() || v >= embeddings.num_nodes())
      throw std::invalid_argument(std::string(who) + ": node out of range");
}

}  // namespace

EdgeMemory build_edge_memory(const EmbeddingTable& embeddings,
                             std::span<const Edge> pos_edges,
                             std::span<const Edge> neg_edges,
                             const TieBreakPolicy& tie) {
  if (pos_edges.empty() || neg_edges.empty())
    throw std::invalid_argument("build_edge_memory: empty edge list");
  check_pairs(embeddings, pos_edges, "build_edge_memory");
  check_pairs(embeddings, neg_edges, "build_edge_memory");

  EdgeMemory em;
  em.dim = embeddings.dim;
  BundleAccumulator plus(em.dim), minus(em.dim);
  for (const auto& [u, v] : pos_edges) plus.add(bind(embeddings[u], embeddings[v]));
  for (const auto& [u, v] : neg_edges) minus.add(bind(embeddings[u], embeddings[v]));
  em.e_plus = plus.majority(tie.for_context({seed_tag::kEdgeMemoryTie, 1}));
  em.e_minus = minus.majority(tie.for_context({seed_tag::kEdgeMemoryTie, 2}));
  em.pos_count = pos_edges.size();
  em.neg_count = neg_edges.size();
  return em;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double pair_a_hat(double d_plus, double d_minus) {
  if (d_plus < d_minus) return sigmoid((1.0 - d_plus) + d_minus);
  return sigmoid(d_plus - (1.0 - d_minus));
}

PairScores score_pairs(const EmbeddingTable& embeddings, const EdgeMemory& em,
                       std::span<const Edge> pairs) {
  if (em.dim != embeddings.dim)
    throw std::invalid_argument("score_pairs: dimension mismatch");
  check_pairs(embeddings, pairs, "score_pairs");
  PairScores out;
  out.pairs.assign(pairs.begin(), pairs.end());
  out.d_plus.reserve(pairs.size());
  out.d_minus.reserve(pairs.size());
  out.a_hat.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    double dp = hamming(bind(embeddings[u], em.e_plus), embeddings[v]);
    double dm = hamming(bind(embeddings[u], em.e_minus), embeddings[v]);
    out.d_plus.push_back(dp);
    out.d_minus.push_back(dm);
    out.a_hat.push_back(pair_a_hat(dp, dm));
  }
  return out;
}

std::vector<double> full_adjacency(const EmbeddingTable& embeddings,
                                   const EdgeMemory& em,
                                   std::size_t max_cells) {
  std::size_t n = embeddings.num_nodes();
  if (n * n > max_cells)
    throw std::invalid_argument(
        "full_adjacency: " + std::to_string(n) + " nodes need " +
        std::to_string(n * n) + " cells, budget is " +
        std::to_string(max_cells));
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row_plus = bind(embeddings[i], em.e_plus);
    auto row_minus = bind(embeddings[i], em.e_minus);
    for (std::size_t j = 0; j < n; ++j)
      a[i * n + j] = pair_a_hat(hamming(row_plus, embeddings[j]),
                                hamming(row_minus, embeddings[j]));
  }
  return a;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc_roc: size mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (int y : labels) (y == 1 ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auc_roc: both classes required");

  // Mann-Whitney with average ranks over tied score groups.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j;
  }
  double u_stat =
      rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u_stat / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double average_precision(std::span<const double> scores,
                         std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("average_precision: size mismatch");
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += y == 1;
  if (n_pos == 0 || n_pos == labels.size())
    throw std::invalid_argument("average_precision: both classes required");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0, seen = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      ++seen;
      tp += labels[order[k]] == 1;
    }
    double precision = static_cast<double>(tp) / static_cast<double>(seen);
    double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

std::vector<Edge> sample_non_edges(const GraphStore& graph, std::size_t count,
                                   std::span<const Edge> exclude,
                                   std::uint64_t seed) {
  std::size_t n = graph.num_nodes();
  if (n < 2) throw std::invalid_argument("sample_non_edges: need >= 2 nodes");
  std::size_t all_pairs = n * (n - 1) / 2;
  if (graph.num_edges() + exclude.size() + count > all_pairs)
    throw std::invalid_argument("sample_non_edges: not enough non-edges");

  std::set<Edge> taken;
  for (const auto& [u, v] : exclude)
    taken.insert(u < v ? Edge{u, v} : Edge{v, u});

  RandomStream rng(derive_seed({seed, seed_tag::kNegativeSample}));
  std::vector<Edge> out;
  out.reserve(count);
  while (out.size() < count) {
    NodeId u = static_cast<NodeId>(rng.next_below(n));
    NodeId v = static_cast<NodeId>(rng.next_below(n));
    if (u == v) continue;
    Edge e = u < v ? Edge{u, v} : Edge{v, u};
    if (graph.has_edge(e.first, e.second) || taken.count(e)) continue;
    taken.insert(e);
    out.push_back(e);
  }
  return out;
}

}  // namespace hdgl
