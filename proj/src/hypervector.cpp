#include "hdgl/hypervector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hdgl {

namespace {

std::size_t words_for(std::size_t dim) {
  return (dim + Hypervector::kWordBits - 1) / Hypervector::kWordBits;
}

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

// Reads n <= 64 bits starting at logical position pos. Caller guarantees
// pos + n does not exceed the packed capacity.
std::uint64_t read_bits(std::span<const std::uint64_t> w, std::size_t pos,
                        unsigned n) {
  std::size_t wi = pos >> 6;
  unsigned off = pos & 63;
  std::uint64_t v = w[wi] >> off;
  if (off != 0 && off + n > 64) v |= w[wi + 1] << (64 - off);
  if (n < 64) v &= (std::uint64_t{1} << n) - 1;
  return v;
}

// Writes n <= 64 bits of v at logical position pos; target bits must be zero.
void write_bits(std::span<std::uint64_t> w, std::size_t pos, unsigned n,
                std::uint64_t v) {
  if (n < 64) v &= (std::uint64_t{1} << n) - 1;
  std::size_t wi = pos >> 6;
  unsigned off = pos & 63;
  w[wi] |= v << off;
  if (off != 0 && off + n > 64) w[wi + 1] |= v >> (64 - off);
}

// Copies len bits from src[src_pos..] into dst[dst_pos..] in 64-bit chunks.
void copy_bit_range(std::span<std::uint64_t> dst, std::size_t dst_pos,
                    std::span<const std::uint64_t> src, std::size_t src_pos,
                    std::size_t len) {
  std::size_t done = 0;
  while (done < len) {
    unsigned n = static_cast<unsigned>(std::min<std::size_t>(64, len - done));
    write_bits(dst, dst_pos + done, n, read_bits(src, src_pos + done, n));
    done += n;
  }
}

}  // namespace

Hypervector::Hypervector(std::size_t dim)
    : dim_(dim), words_(words_for(dim), 0) {
  if (dim == 0) throw std::invalid_argument("Hypervector: dimension must be >= 1");
}

Hypervector Hypervector::random(std::size_t dim, std::uint64_t seed) {
  Hypervector out(dim);
  RandomStream rng(seed);
  for (auto& w : out.words_) w = rng.next_u64();
  out.clear_padding();
  return out;
}

Hypervector Hypervector::from_string(std::string_view bits) {
  Hypervector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("Hypervector::from_string: expected 0/1");
    out.set_bit(i, bits[i] == '1');
  }
  return out;
}

void Hypervector::clear_padding() {
  std::size_t used = dim_ % kWordBits;
  if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
}

std::size_t Hypervector::popcount() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::string Hypervector::to_string() const {
  std::string s(dim_, '0');
  for (std::size_t i = 0; i < dim_; ++i)
    if (bit(i)) s[i] = '1';
  return s;
}

Hypervector bind(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a.dim(), b.dim(), "bind");
  Hypervector out = a;
  for (std::size_t w = 0; w < out.word_count(); ++w) out.word(w) ^= b.word(w);
  return out;
}

Hypervector rotate(const Hypervector& a, std::size_t k) {
  k %= a.dim();
  if (k == 0) return a;
  Hypervector out(a.dim());
  std::span<std::uint64_t> dst(&out.word(0), out.word_count());
  copy_bit_range(dst, 0, a.words(), k, a.dim() - k);
  copy_bit_range(dst, a.dim() - k, a.words(), 0, k);
  return out;
}

double hamming(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a.dim(), b.dim(), "hamming");
  std::size_t differing = 0;
  for (std::size_t w = 0; w < a.word_count(); ++w)
    differing += std::popcount(a.word(w) ^ b.word(w));
  return static_cast<double>(differing) / static_cast<double>(a.dim());
}

TieBreakPolicy TieBreakPolicy::for_context(
    std::initializer_list<std::uint64_t> parts) const {
  if (kind != Kind::SeededRandom) return *this;
  std::uint64_t h = seed;
  for (std::uint64_t p : parts) h = split_mix64(h ^ split_mix64(p));
  return seeded(h);
}

BundleAccumulator::BundleAccumulator(std::size_t dim)
    : dim_(dim), counts_(dim, 0) {
  if (dim == 0)
    throw std::invalid_argument("BundleAccumulator: dimension must be >= 1");
}

void BundleAccumulator::add(const Hypervector& v) {
  require_same_dim(dim_, v.dim(), "BundleAccumulator::add");
  for (std::size_t w = 0; w < v.word_count(); ++w) {
    std::uint64_t bits = v.word(w);
    std::size_t base = w * Hypervector::kWordBits;
    std::size_t n = std::min(Hypervector::kWordBits, dim_ - base);
    for (std::size_t b = 0; b < n; ++b)
      counts_[base + b] += static_cast<std::int32_t>((bits >> b) & 1u) * 2 - 1;
  }
  ++items_added_;
}

void BundleAccumulator::remove(const Hypervector& v) {
  require_same_dim(dim_, v.dim(), "BundleAccumulator::remove");
  if (items_added_ == 0)
    throw std::logic_error("BundleAccumulator::remove: accumulator is empty");
  for (std::size_t w = 0; w < v.word_count(); ++w) {
    std::uint64_t bits = v.word(w);
    std::size_t base = w * Hypervector::kWordBits;
    std::size_t n = std::min(Hypervector::kWordBits, dim_ - base);
    for (std::size_t b = 0; b < n; ++b)
      counts_[base + b] -= static_cast<std::int32_t>((bits >> b) & 1u) * 2 - 1;
  }
  --items_added_;
}

void BundleAccumulator::merge(const BundleAccumulator& other) {
  require_same_dim(dim_, other.dim_, "BundleAccumulator::merge");
  for (std::size_t i = 0; i < dim_; ++i) counts_[i] += other.counts_[i];
  items_added_ += other.items_added_;
}

Hypervector BundleAccumulator::majority(const TieBreakPolicy& tie) const {
  if (items_added_ == 0)
    throw std::logic_error("BundleAccumulator::majority: accumulator is empty");
  Hypervector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    bool bit = counts_[i] > 0 || (counts_[i] == 0 && tie.resolve(i));
    if (bit) out.set_bit(i, true);
  }
  return out;
}

BundleAccumulator BundleAccumulator::from_counts(
    std::vector<std::int32_t> counts, std::size_t items_added) {
  BundleAccumulator acc(counts.size());
  acc.counts_ = std::move(counts);
  acc.items_added_ = items_added;
  return acc;
}

Hypervector bundle(std::span<const Hypervector> vs, const TieBreakPolicy& tie) {
  if (vs.empty()) throw std::invalid_argument("bundle: empty input list");
  BundleAccumulator acc(vs.front().dim());
  for (const auto& v : vs) acc.add(v);
  return acc.majority(tie);
}

}  // namespace hdgl
