#include "hdgl/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace hdgl {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json dataset_summary(const DatasetBundle& b) {
  json j;
  j["nodes"] = b.num_nodes();
  j["edges"] = b.graph.num_edges();
  j["feature_dim"] = b.features.dim();
  j["classes"] = b.num_classes;
  j["train"] = b.train.size();
  j["val"] = b.val.size();
  j["test"] = b.test.size();
  j["self_loops_dropped"] = b.graph.self_loops_dropped();
  return j;
}

void aggregate(RunReport& report) {
  if (report.repeats.empty()) return;
  for (const auto& [key, _] : report.repeats.front().metrics) {
    double sum = 0.0;
    for (const auto& r : report.repeats) sum += r.metrics.at(key);
    double mean = sum / static_cast<double>(report.repeats.size());
    double sq = 0.0;
    for (const auto& r : report.repeats) {
      double d = r.metrics.at(key) - mean;
      sq += d * d;
    }
    double stddev =
        report.repeats.size() > 1
            ? std::sqrt(sq / static_cast<double>(report.repeats.size() - 1))
            : 0.0;
    report.mean[key] = mean;
    report.stddev[key] = stddev;
  }
  for (const auto& r : report.repeats) {
    report.phase_totals.encode += r.phases.encode;
    report.phase_totals.embed += r.phases.embed;
    report.phase_totals.fit += r.phases.fit;
    report.phase_totals.infer += r.phases.infer;
  }
}

}  // namespace

PipelineEmbeddings build_embeddings(const FeatureMatrix& features,
                                    const GraphStore& graph,
                                    const RunConfig& cfg, std::size_t dim,
                                    std::size_t repeat_index) {
  PipelineEmbeddings out;
  out.seed = derive_seed({cfg.seed, seed_tag::kRepeat, repeat_index});

  auto t0 = Clock::now();
  auto encoder =
      Encoder::fit(features.dim(), dim, cfg.lambda, out.seed, cfg.storage);
  auto sketches = encoder.encode_all(features);
  out.phases.encode = seconds_since(t0);
  out.counters.encode_calls += 1;
  out.counters.encoded_nodes += sketches.size();

  EmbedConfig ecfg;
  ecfg.hop1_budget = cfg.hop1_budget;
  ecfg.hop2_budget = cfg.hop2_budget;
  ecfg.seed = out.seed;
  ecfg.tie = TieBreakPolicy::seeded(out.seed);

  t0 = Clock::now();
  out.table = embed_all(sketches, graph, ecfg);
  out.phases.embed = seconds_since(t0);
  out.counters.embed_calls += 1;
  out.counters.embedded_nodes += out.table.num_nodes();
  return out;
}

namespace {

FeatureMatrix prepared_features(const DatasetBundle& bundle,
                                const RunConfig& cfg) {
  FeatureMatrix features = bundle.features;
  if (cfg.normalize_features) features.l2_normalize_rows();
  return features;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.repeats == 0)
    throw std::invalid_argument("RunConfig: repeats must be >= 1");
  if (cfg.hop1_budget % 2 == 0 || cfg.hop2_budget % 2 == 0)
    throw std::invalid_argument("RunConfig: hop budgets must be odd");
}

std::vector<Labeled> masked(const std::vector<Labeled>& pool,
                            const std::set<int>& allowed) {
  std::vector<Labeled> out;
  for (const auto& entry : pool)
    if (allowed.count(entry.second)) out.push_back(entry);
  return out;
}

}  // namespace

std::size_t RunConfig::effective_dim(std::size_t n_nodes) const {
  if (dim != 0) return dim;
  return n_nodes <= 6000 ? 50000 : 20000;
}

json RunConfig::to_json() const {
  json j;
  j["dim"] = dim;
  j["lambda"] = lambda;
  j["seed"] = seed;
  j["hop1"] = hop1_budget;
  j["hop2"] = hop2_budget;
  j["repeats"] = repeats;
  j["normalize_features"] = normalize_features;
  if (!dim_sweep.empty()) j["dim_sweep"] = dim_sweep;
  return j;
}

json PhaseTimes::to_json() const {
  return json{{"encode_seconds", encode},
              {"embed_seconds", embed},
              {"fit_seconds", fit},
              {"infer_seconds", infer}};
}

json PipelineCounters::to_json() const {
  return json{{"encode_calls", encode_calls},
              {"encoded_nodes", encoded_nodes},
              {"embed_calls", embed_calls},
              {"embedded_nodes", embedded_nodes},
              {"fit_members", fit_members}};
}

json RunReport::to_json() const {
  json j;
  j["format_version"] = kReportFormatVersion;
  j["task"] = task;
  j["config"] = config;
  j["dataset"] = dataset;
  j["repeats"] = json::array();
  for (const auto& r : repeats) {
    json e;
    e["seed"] = r.seed;
    e["metrics"] = r.metrics;
    e["phases"] = r.phases.to_json();
    e["counters"] = r.counters.to_json();
    j["repeats"].push_back(std::move(e));
  }
  j["metrics_mean"] = mean;
  j["metrics_std"] = stddev;
  j["phase_totals"] = phase_totals.to_json();
  if (!incremental.empty()) {
    j["incremental"] = json::array();
    for (const auto& steps : incremental) {
      json seq = json::array();
      for (const auto& s : steps) {
        json e;
        e["t"] = s.t;
        e["labels"] = s.labels;
        e["accuracy"] = s.accuracy;
        e["wall_seconds"] = s.wall_seconds;
        e["added_members"] = s.added_members;
        e["test_nodes"] = s.test_nodes;
        e["counters"] = s.counters.to_json();
        seq.push_back(std::move(e));
      }
      j["incremental"].push_back(std::move(seq));
    }
  }
  if (!sweep.empty()) {
    j["sweep"] = json::array();
    for (const auto& s : sweep) {
      json e;
      e["dim"] = s.dim;
      e["metrics_mean"] = s.mean;
      e["metrics_std"] = s.stddev;
      j["sweep"].push_back(std::move(e));
    }
  }
  return j;
}

RunReport run_nodeclass(const DatasetBundle& bundle, const RunConfig& cfg) {
  validate_config(cfg);
  if (bundle.train.empty() || bundle.test.empty())
    throw std::invalid_argument("run_nodeclass: node splits required");

  auto features = prepared_features(bundle, cfg);
  std::size_t dim = cfg.effective_dim(bundle.num_nodes());
  auto labeled = bundle.labeled_train_val();
  auto test = bundle.labeled_test();

  RunReport report;
  report.task = "nodeclass";
  report.config = cfg.to_json();
  report.config["dim"] = dim;
  report.dataset = dataset_summary(bundle);

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    auto er = build_embeddings(features, bundle.graph, cfg, dim, r);
    RepeatEntry entry;
    entry.seed = er.seed;
    entry.phases = er.phases;
    entry.counters = er.counters;

    auto t0 = Clock::now();
    auto model =
        ClassModel::fit(er.table, labeled, TieBreakPolicy::seeded(er.seed));
    entry.phases.fit = seconds_since(t0);
    entry.counters.fit_members += labeled.size();

    t0 = Clock::now();
    entry.metrics["accuracy"] = model.accuracy(er.table, test);
    entry.phases.infer = seconds_since(t0);

    report.repeats.push_back(std::move(entry));
  }
  aggregate(report);
  return report;
}

namespace {

RunReport run_linkpred_single(const DatasetBundle& bundle,
                              const RunConfig& cfg, std::size_t dim) {
  const auto& links = *bundle.links;
  auto features = prepared_features(bundle, cfg);
  auto train_graph =
      GraphStore::from_edges(bundle.num_nodes(), links.train_edges);

  // Evaluation pairs are fixed by the split; keep them out of e_minus.
  std::vector<Edge> exclude;
  exclude.insert(exclude.end(), links.val_neg.begin(), links.val_neg.end());
  exclude.insert(exclude.end(), links.test_neg.begin(), links.test_neg.end());

  RunReport report;
  report.task = "linkpred";
  report.config = cfg.to_json();
  report.config["dim"] = dim;
  report.dataset = dataset_summary(bundle);

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    auto er = build_embeddings(features, train_graph, cfg, dim, r);
    RepeatEntry entry;
    entry.seed = er.seed;
    entry.phases = er.phases;
    entry.counters = er.counters;

    auto t0 = Clock::now();
    auto neg_train = sample_non_edges(bundle.graph, links.train_edges.size(),
                                      exclude, er.seed);
    auto em = build_edge_memory(er.table, links.train_edges, neg_train,
                                TieBreakPolicy::seeded(er.seed));
    entry.phases.fit = seconds_since(t0);
    entry.counters.fit_members += links.train_edges.size() + neg_train.size();

    t0 = Clock::now();
    auto evaluate = [&](const std::vector<Edge>& pos,
                        const std::vector<Edge>& neg, const char* auc_key,
                        const char* ap_key) {
      std::vector<Edge> pairs(pos);
      pairs.insert(pairs.end(), neg.begin(), neg.end());
      std::vector<int> labels(pos.size(), 1);
      labels.insert(labels.end(), neg.size(), 0);
      auto scores = score_pairs(er.table, em, pairs);
      entry.metrics[auc_key] = auc_roc(scores.a_hat, labels);
      entry.metrics[ap_key] = average_precision(scores.a_hat, labels);
    };
    evaluate(links.test_edges, links.test_neg, "auc", "ap");
    if (!links.val_edges.empty() && !links.val_neg.empty())
      evaluate(links.val_edges, links.val_neg, "val_auc", "val_ap");
    entry.phases.infer = seconds_since(t0);

    report.repeats.push_back(std::move(entry));
  }
  aggregate(report);
  return report;
}

}  // namespace

RunReport run_linkpred(const DatasetBundle& bundle, const RunConfig& cfg) {
  validate_config(cfg);
  if (!bundle.links)
    throw std::invalid_argument("run_linkpred: link splits required");

  if (cfg.dim_sweep.empty())
    return run_linkpred_single(bundle, cfg,
                               cfg.effective_dim(bundle.num_nodes()));

  RunReport report;
  report.task = "linkpred";
  report.config = cfg.to_json();
  report.dataset = dataset_summary(bundle);
  for (std::size_t dim : cfg.dim_sweep) {
    auto sub = run_linkpred_single(bundle, cfg, dim);
    SweepEntry e;
    e.dim = dim;
    e.mean = sub.mean;
    e.stddev = sub.stddev;
    report.sweep.push_back(std::move(e));
  }
  return report;
}

namespace {

void validate_schedule(const LabelSchedule& schedule) {
  if (schedule.empty())
    throw std::invalid_argument("run_incremental: empty schedule");
  std::set<int> prev;
  for (const auto& step : schedule) {
    if (step.empty())
      throw std::invalid_argument("run_incremental: empty label set in schedule");
    std::set<int> cur(step.begin(), step.end());
    if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
      throw std::invalid_argument(
          "run_incremental: schedule steps must be nested increasing");
    prev = std::move(cur);
  }
}

// Runs the schedule for one repeat; reports steps and hands back the final
// model.
std::vector<IncrementalStep> run_schedule(const PipelineEmbeddings& er,
                                          const DatasetBundle& bundle,
                                          const LabelSchedule& schedule,
                                          ClassModel& model_out) {
  auto pool = bundle.labeled_train_val();
  auto test = bundle.labeled_test();
  std::vector<IncrementalStep> steps;
  std::set<int> revealed;

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    IncrementalStep step;
    step.t = static_cast<int>(t + 1);
    step.labels = schedule[t];
    std::sort(step.labels.begin(), step.labels.end());

    std::set<int> current(schedule[t].begin(), schedule[t].end());
    std::set<int> fresh;
    std::set_difference(current.begin(), current.end(), revealed.begin(),
                        revealed.end(), std::inserter(fresh, fresh.begin()));

    auto t0 = Clock::now();
    auto newly = masked(pool, fresh);
    step.added_members = newly.size();
    if (t == 0) {
      std::vector<int> expected(current.begin(), current.end());
      model_out = ClassModel::fit(er.table, newly,
                                  TieBreakPolicy::seeded(er.seed), expected);
      step.counters.fit_members = newly.size();
    } else if (!newly.empty()) {
      model_out.add_members(er.table, newly);
      step.counters.fit_members = newly.size();
    }
    auto visible_test = masked(test, current);
    step.test_nodes = visible_test.size();
    step.accuracy = model_out.accuracy(er.table, visible_test);
    step.wall_seconds = seconds_since(t0);
    if (t == 0) {
      // Representation building happens once, ahead of the first step.
      step.counters.encode_calls = er.counters.encode_calls;
      step.counters.encoded_nodes = er.counters.encoded_nodes;
      step.counters.embed_calls = er.counters.embed_calls;
      step.counters.embedded_nodes = er.counters.embedded_nodes;
      step.wall_seconds += er.phases.encode + er.phases.embed;
    }
    steps.push_back(std::move(step));
    revealed = std::move(current);
  }
  return steps;
}

}  // namespace

RunReport run_incremental(const DatasetBundle& bundle, const RunConfig& cfg,
                          const LabelSchedule& schedule) {
  validate_config(cfg);
  validate_schedule(schedule);
  if (bundle.train.empty() || bundle.test.empty())
    throw std::invalid_argument("run_incremental: node splits required");

  auto features = prepared_features(bundle, cfg);
  std::size_t dim = cfg.effective_dim(bundle.num_nodes());

  RunReport report;
  report.task = "incremental";
  report.config = cfg.to_json();
  report.config["dim"] = dim;
  report.config["schedule"] = schedule;
  report.dataset = dataset_summary(bundle);

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    auto er = build_embeddings(features, bundle.graph, cfg, dim, r);
    ClassModel model;
    auto steps = run_schedule(er, bundle, schedule, model);

    RepeatEntry entry;
    entry.seed = er.seed;
    entry.phases = er.phases;
    entry.counters = er.counters;
    entry.metrics["final_accuracy"] = steps.back().accuracy;
    for (const auto& s : steps) entry.counters.fit_members += s.counters.fit_members;
    report.repeats.push_back(std::move(entry));
    report.incremental.push_back(std::move(steps));
  }
  aggregate(report);
  return report;
}

std::vector<ClassModel> incremental_final_models(const DatasetBundle& bundle,
                                                 const RunConfig& cfg,
                                                 const LabelSchedule& schedule) {
  validate_config(cfg);
  validate_schedule(schedule);
  auto features = prepared_features(bundle, cfg);
  std::size_t dim = cfg.effective_dim(bundle.num_nodes());
  std::vector<ClassModel> out;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    auto er = build_embeddings(features, bundle.graph, cfg, dim, r);
    ClassModel model;
    run_schedule(er, bundle, schedule, model);
    out.push_back(std::move(model));
  }
  return out;
}

LabelSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_schedule: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.filename().string() + ": " + e.what());
  }
  if (!j.is_array())
    throw std::runtime_error("load_schedule: expected an array of label sets");
  LabelSchedule schedule;
  for (const auto& step : j) {
    if (!step.is_array())
      throw std::runtime_error("load_schedule: each step must be an array");
    schedule.push_back(step.get<std::vector<int>>());
  }
  return schedule;
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out)
      throw std::runtime_error("write_report: cannot open " + tmp.string());
    out << report.to_json().dump(2) << "\n";
    if (!out) throw std::runtime_error("write_report: write failed");
  }
  std::filesystem::rename(tmp, path);
}

namespace {
constexpr char kEmbedMagic[8] = {'H', 'D', 'G', 'L', 'E', 'M', 'B', '1'};

void write_u64_le(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t read_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}
}  // namespace

void write_embedding_dump(const EmbeddingTable& table,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_embedding_dump: cannot open " +
                             path.string());
  out.write(kEmbedMagic, 8);
  write_u64_le(out, table.dim);
  write_u64_le(out, table.num_nodes());
  std::size_t row_bytes = (table.dim + 7) / 8;
  std::vector<char> row(row_bytes);
  for (const auto& v : table.vectors) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t b = 0; b < row_bytes; ++b) {
      std::uint64_t word = v.words()[b / 8];
      row[b] = static_cast<char>((word >> ((b % 8) * 8)) & 0xFF);
    }
    out.write(row.data(), static_cast<std::streamsize>(row_bytes));
  }
  if (!out) throw std::runtime_error("write_embedding_dump: write failed");
}

EmbeddingTable read_embedding_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("read_embedding_dump: cannot open " +
                             path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string_view(magic, 8) != std::string_view(kEmbedMagic, 8))
    throw std::runtime_error("read_embedding_dump: bad magic");
  EmbeddingTable table;
  table.dim = read_u64_le(in);
  std::uint64_t n = read_u64_le(in);
  std::size_t row_bytes = (table.dim + 7) / 8;
  std::vector<unsigned char> row(row_bytes);
  for (std::uint64_t v = 0; v < n; ++v) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row_bytes));
    Hypervector hv(table.dim);
    for (std::size_t i = 0; i < table.dim; ++i)
      if ((row[i / 8] >> (i % 8)) & 1u) hv.set_bit(i, true);
    table.vectors.push_back(std::move(hv));
  }
  if (!in) throw std::runtime_error("read_embedding_dump: truncated file");
  return table;
}

void write_scores_tsv(const PairScores& scores, std::span<const int> labels,
                      const std::filesystem::path& path) {
  if (!labels.empty() && labels.size() != scores.pairs.size())
    throw std::invalid_argument("write_scores_tsv: label count mismatch");
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_scores_tsv: cannot open " + path.string());
  out << "u\tv\td_plus\td_minus\ta_hat\tlabel\n";
  out.precision(17);
  for (std::size_t i = 0; i < scores.pairs.size(); ++i) {
    out << scores.pairs[i].first << '\t' << scores.pairs[i].second << '\t'
        << scores.d_plus[i] << '\t' << scores.d_minus[i] << '\t'
        << scores.a_hat[i] << '\t' << (labels.empty() ? -1 : labels[i])
        << '\n';
  }
}

}  // namespace hdgl
