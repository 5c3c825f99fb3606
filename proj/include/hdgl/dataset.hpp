#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hdgl/encoder.hpp"
#include "hdgl/graph.hpp"
#include "hdgl/nodeclass.hpp"

namespace hdgl {

// Transductive link-prediction split: positives partition the edge set,
// negatives are sampled non-edges fixed by the split file.
struct LinkSplits {
  std::vector<Edge> train_edges;
  std::vector<Edge> val_edges;
  std::vector<Edge> val_neg;
  std::vector<Edge> test_edges;
  std::vector<Edge> test_neg;
};

struct DatasetBundle {
  GraphStore graph;
  FeatureMatrix features;
  std::vector<int> labels;  // -1 where unlabeled
  int num_classes = 0;
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
  std::optional<LinkSplits> links;

  std::size_t num_nodes() const { return graph.num_nodes(); }

  // Train and validation members with their labels, in split order; both
  // sets feed learning together.
  std::vector<Labeled> labeled_train_val() const;
  std::vector<Labeled> labeled_test() const;
};

// Loads and validates a dataset directory:
//   graph.edges      one "u<TAB>v" per line, zero-based ids
//   features.dense   CSV, row i = node i   (exactly one of the two
//   features.coo     "node,col,value" lines with implicit zeros)
//   labels.tsv       "node<TAB>label", labels 0..L-1
//   splits.json      {"train":[...], "val":[...], "test":[...]}
//   links.json       optional link splits
DatasetBundle load_dataset(const std::filesystem::path& dir);

}  // namespace hdgl
