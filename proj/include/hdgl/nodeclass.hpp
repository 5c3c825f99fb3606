#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hdgl/embed.hpp"
#include "hdgl/hypervector.hpp"

namespace hdgl {

using Labeled = std::pair<NodeId, int>;

struct Prediction {
  int label = -1;
  std::map<int, double> distances;
};

// Nearest-class-vector classifier. Each class keeps its raw vote counters
// alongside the materialized class vector, so incremental member additions
// reproduce the exact majority a one-shot fit would compute.
class ClassModel {
 public:
  ClassModel() = default;

  // Bundles member embeddings per class. `expected_classes`, when nonempty,
  // declares the label universe; a declared class with no members is an
  // error naming the label.
  static ClassModel fit(const EmbeddingTable& embeddings,
                        std::span<const Labeled> labeled,
                        const TieBreakPolicy& tie,
                        std::span<const int> expected_classes = {});

  // Adds members (possibly of brand-new classes); only touched classes are
  // re-materialized, untouched class vectors stay bit-identical.
  void add_members(const EmbeddingTable& embeddings,
                   std::span<const Labeled> new_labeled);

  Prediction predict(const Hypervector& z) const;

  double accuracy(const EmbeddingTable& embeddings,
                  std::span<const Labeled> test) const;

  std::size_t dim() const { return dim_; }
  std::size_t num_classes() const { return classes_.size(); }
  std::vector<int> labels() const;
  const Hypervector& class_vector(int label) const;
  std::size_t member_count(int label) const;
  const TieBreakPolicy& tie_policy() const { return tie_; }

  // Binary persistence: header (dim, class count, tie policy) plus the raw
  // per-class counters; round-trips bit-exactly.
  void save(const std::filesystem::path& path) const;
  static ClassModel load(const std::filesystem::path& path);

  bool operator==(const ClassModel&) const;

 private:
  struct Entry {
    BundleAccumulator acc;
    Hypervector vector;
    std::size_t members = 0;
  };

  void rematerialize(int label);
  const Entry& entry(int label) const;

  std::size_t dim_ = 0;
  TieBreakPolicy tie_;
  std::map<int, Entry> classes_;
};

}  // namespace hdgl
