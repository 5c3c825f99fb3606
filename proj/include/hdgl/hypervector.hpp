#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdgl/rng.hpp"

namespace hdgl {

// Fixed-width binary vector of logical dimension `dim`, bit-packed into
// 64-bit words. Bit i lives at word i/64, position i%64. Pad bits at
// positions >= dim are kept zero by every operation.
class Hypervector {
 public:
  static constexpr std::size_t kWordBits = 64;

  Hypervector() = default;
  explicit Hypervector(std::size_t dim);

  // Each bit i.i.d. Bernoulli(0.5) from a stream keyed by `seed`.
  static Hypervector random(std::size_t dim, std::uint64_t seed);

  // Parses "0101..." with character index = dimension index.
  static Hypervector from_string(std::string_view bits);

  std::size_t dim() const { return dim_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }

  bool bit(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set_bit(std::size_t i, bool value) {
    std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= mask;
    else
      words_[i / kWordBits] &= ~mask;
  }

  std::uint64_t& word(std::size_t w) { return words_[w]; }
  std::uint64_t word(std::size_t w) const { return words_[w]; }

  // Zeroes any bits at positions >= dim in the last word.
  void clear_padding();

  std::size_t popcount() const;
  std::string to_string() const;

  bool operator==(const Hypervector&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

// Bitwise XOR. Commutative, associative, self-inverse.
Hypervector bind(const Hypervector& a, const Hypervector& b);

// Circular left shift by k over the logical dim bits: out[i] = a[(i+k) % dim].
Hypervector rotate(const Hypervector& a, std::size_t k);

// Normalized Hamming distance in [0, 1].
double hamming(const Hypervector& a, const Hypervector& b);

// Resolves bundle ties at dimension `index` for a given policy.
struct TieBreakPolicy {
  enum class Kind { SeededRandom, ConstantZero, ConstantOne };

  Kind kind = Kind::SeededRandom;
  std::uint64_t seed = 0;

  static TieBreakPolicy seeded(std::uint64_t seed) {
    return TieBreakPolicy{Kind::SeededRandom, seed};
  }
  static TieBreakPolicy zero() { return TieBreakPolicy{Kind::ConstantZero, 0}; }
  static TieBreakPolicy one() { return TieBreakPolicy{Kind::ConstantOne, 0}; }

  // Derives a policy of the same kind for a nested context (node, hop,
  // class label, ...). Constant policies are context-free.
  TieBreakPolicy for_context(std::initializer_list<std::uint64_t> parts) const;

  bool resolve(std::size_t index) const {
    switch (kind) {
      case Kind::ConstantZero:
        return false;
      case Kind::ConstantOne:
        return true;
      case Kind::SeededRandom:
      default:
        return split_mix64(seed ^ split_mix64(index + 1)) & 1u;
    }
  }
};

// Per-dimension signed vote counters: exact, order-independent majority
// over a multiset of hypervectors, supporting incremental add/remove.
class BundleAccumulator {
 public:
  BundleAccumulator() = default;
  explicit BundleAccumulator(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t items_added() const { return items_added_; }
  std::span<const std::int32_t> counts() const { return counts_; }

  void add(const Hypervector& v);
  void remove(const Hypervector& v);

  // Sums counters from another accumulator of equal dim (sharded use).
  void merge(const BundleAccumulator& other);

  // out[i] = 1 if counts[i] > 0, 0 if < 0, tie policy at == 0.
  Hypervector majority(const TieBreakPolicy& tie) const;

  // Restores an accumulator from persisted counters.
  static BundleAccumulator from_counts(std::vector<std::int32_t> counts,
                                       std::size_t items_added);

  bool operator==(const BundleAccumulator&) const = default;

 private:
  std::size_t dim_ = 0;
  std::size_t items_added_ = 0;
  std::vector<std::int32_t> counts_;
};

// Majority bundle of a nonempty list; permutation-invariant.
Hypervector bundle(std::span<const Hypervector> vs, const TieBreakPolicy& tie);

}  // namespace hdgl
