#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdgl/dataset.hpp"
#include "hdgl/embed.hpp"
#include "hdgl/encoder.hpp"
#include "hdgl/linkpred.hpp"
#include "hdgl/nodeclass.hpp"

namespace hdgl {

inline constexpr const char* kReportFormatVersion = "hdgl-report/1";

struct RunConfig {
  std::size_t dim = 0;  // 0 selects 50000 for graphs up to 6000 nodes, else 20000
  double lambda = 0.0;
  std::uint64_t seed = 1;
  std::size_t hop1_budget = 11;
  std::size_t hop2_budget = 21;
  std::size_t repeats = 1;
  bool normalize_features = false;
  std::vector<std::size_t> dim_sweep;  // linkpred only
  Encoder::Storage storage = Encoder::Storage::Auto;

  std::size_t effective_dim(std::size_t n_nodes) const;
  nlohmann::json to_json() const;
};

struct PhaseTimes {
  double encode = 0.0;
  double embed = 0.0;
  double fit = 0.0;
  double infer = 0.0;
  nlohmann::json to_json() const;
};

// One-pass instrumentation: how many times each phase ran and how many
// nodes/members it touched.
struct PipelineCounters {
  std::size_t encode_calls = 0;
  std::size_t encoded_nodes = 0;
  std::size_t embed_calls = 0;
  std::size_t embedded_nodes = 0;
  std::size_t fit_members = 0;
  nlohmann::json to_json() const;
};

struct RepeatEntry {
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;
  PhaseTimes phases;
  PipelineCounters counters;
};

struct IncrementalStep {
  int t = 0;
  std::vector<int> labels;
  double accuracy = 0.0;
  double wall_seconds = 0.0;
  std::size_t added_members = 0;
  std::size_t test_nodes = 0;
  PipelineCounters counters;  // per-step; zero encode/embed for t >= 2
};

struct SweepEntry {
  std::size_t dim = 0;
  std::map<std::string, double> mean;
  std::map<std::string, double> stddev;
};

struct RunReport {
  std::string task;
  nlohmann::json config;
  nlohmann::json dataset;
  std::vector<RepeatEntry> repeats;
  std::map<std::string, double> mean;
  std::map<std::string, double> stddev;
  PhaseTimes phase_totals;
  std::vector<std::vector<IncrementalStep>> incremental;  // per repeat
  std::vector<SweepEntry> sweep;

  nlohmann::json to_json() const;
};

using LabelSchedule = std::vector<std::vector<int>>;

// Front half of every task for one repeat: derive the repeat seed, fit the
// encoder, sketch all nodes, aggregate neighborhoods over `graph`.
struct PipelineEmbeddings {
  std::uint64_t seed = 0;
  EmbeddingTable table;
  PhaseTimes phases;
  PipelineCounters counters;
};

PipelineEmbeddings build_embeddings(const FeatureMatrix& features,
                                    const GraphStore& graph,
                                    const RunConfig& cfg, std::size_t dim,
                                    std::size_t repeat_index);

RunReport run_nodeclass(const DatasetBundle& bundle, const RunConfig& cfg);
RunReport run_linkpred(const DatasetBundle& bundle, const RunConfig& cfg);
RunReport run_incremental(const DatasetBundle& bundle, const RunConfig& cfg,
                          const LabelSchedule& schedule);

// Final models per repeat, exposed so equivalence against one-shot fits can
// be checked directly.
std::vector<ClassModel> incremental_final_models(const DatasetBundle& bundle,
                                                 const RunConfig& cfg,
                                                 const LabelSchedule& schedule);

LabelSchedule load_schedule(const std::filesystem::path& path);

// Write-then-rename so readers never observe a partial report.
void write_report(const RunReport& report, const std::filesystem::path& path);

// Packed embedding dump: 8-byte magic, u64 dim, u64 node count, then one
// row of ceil(dim/8) bytes per node, little-endian bit order within bytes.
void write_embedding_dump(const EmbeddingTable& table,
                          const std::filesystem::path& path);
EmbeddingTable read_embedding_dump(const std::filesystem::path& path);

// Per-pair scores as tab-separated text: u, v, d_plus, d_minus, a_hat, label.
void write_scores_tsv(const PairScores& scores, std::span<const int> labels,
                      const std::filesystem::path& path);

}  // namespace hdgl
