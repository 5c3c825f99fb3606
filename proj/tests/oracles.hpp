#pragma once

// Naive reference implementations used as independent oracles in tests.
// Everything here works on plain std::vector<int> bit vectors and scalar
// loops; none of it shares code with the word-packed library path.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hdgl/embed.hpp"
#include "hdgl/graph.hpp"
#include "hdgl/hypervector.hpp"

namespace oracle {

using Bits = std::vector<int>;

inline Bits to_bits(const hdgl::Hypervector& v) {
  Bits out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v.bit(i) ? 1 : 0;
  return out;
}

inline bool equals(const Bits& bits, const hdgl::Hypervector& v) {
  if (bits.size() != v.dim()) return false;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if ((bits[i] != 0) != v.bit(i)) return false;
  return true;
}

inline Bits xor_bits(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

inline Bits rotate_bits(const Bits& a, std::size_t k) {
  std::size_t n = a.size();
  Bits out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[(i + k) % n];
  return out;
}

inline double hamming_bits(const Bits& a, const Bits& b) {
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

// Per-bit vote count: +1 per set bit, -1 per clear bit.
inline std::vector<long> vote_counts(const std::vector<Bits>& vs) {
  std::vector<long> counts(vs.front().size(), 0);
  for (const auto& v : vs)
    for (std::size_t i = 0; i < v.size(); ++i) counts[i] += v[i] ? 1 : -1;
  return counts;
}

inline Bits majority_bits(const std::vector<Bits>& vs,
                          const hdgl::TieBreakPolicy& tie) {
  auto counts = vote_counts(vs);
  Bits out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0)
      out[i] = 1;
    else if (counts[i] < 0)
      out[i] = 0;
    else
      out[i] = tie.resolve(i) ? 1 : 0;
  }
  return out;
}

// AUC by exhaustive pairwise comparison, ties worth 0.5.
inline double pairwise_auc(const std::vector<double>& scores,
                           const std::vector<int>& labels) {
  double wins = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// All length-2 walk endpoints from v, minus occurrences of v itself.
inline std::vector<std::uint32_t> two_hop_walks(
    const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t v) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t u : adj[v])
    for (std::uint32_t w : adj[u])
      if (w != v) out.push_back(w);
  return out;
}

// Straight-line transcription of the aggregation rule with exhaustive
// (unsampled) neighborhoods, evaluated entirely on plain bit vectors.
inline Bits eq2_reference(const std::vector<hdgl::Hypervector>& sketches,
                          const hdgl::GraphStore& g, hdgl::NodeId v,
                          const hdgl::EmbedConfig& cfg) {
  auto hop_majority = [&](int hop) {
    auto multi = g.neighbors_k(v, hop);
    if (multi.empty()) return to_bits(sketches[v]);
    std::vector<Bits> members;
    for (hdgl::NodeId j : multi) members.push_back(to_bits(sketches[j]));
    auto tie = cfg.tie.for_context({hdgl::seed_tag::kBundleTie, v,
                                    static_cast<std::uint64_t>(hop)});
    return majority_bits(members, tie);
  };
  auto b1 = rotate_bits(hop_majority(1), cfg.rot1);
  auto b2 = rotate_bits(hop_majority(2), cfg.rot2);
  return xor_bits(to_bits(sketches[v]), xor_bits(b1, b2));
}

}  // namespace oracle
