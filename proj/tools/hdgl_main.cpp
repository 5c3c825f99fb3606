// Command-line front end: dataset ingestion, the three experiment tasks,
// and the packed embedding dump.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hdgl/dataset.hpp"
#include "hdgl/runner.hpp"

namespace {

struct CommonArgs {
  std::string data_dir;
  hdgl::RunConfig cfg;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--data", args.data_dir, "Dataset directory")->required();
  cmd->add_option("--dim", args.cfg.dim,
                  "HD dimension (0 = auto: 50000 up to 6000 nodes, else "
                  "20000)");
  cmd->add_option("--seed", args.cfg.seed, "Base seed");
  cmd->add_option("--lambda", args.cfg.lambda,
                  "Hyperplane offset half-width (0 = through the origin)");
  cmd->add_option("--hop1", args.cfg.hop1_budget, "1-hop sample budget (odd)");
  cmd->add_option("--hop2", args.cfg.hop2_budget, "2-hop sample budget (odd)");
  cmd->add_option("--out", args.out_path, "Report output path (JSON)");
}

void print_summary(const hdgl::DatasetBundle& b) {
  std::cout << "dataset: " << b.num_nodes() << " nodes, "
            << b.graph.num_edges() << " edges, " << b.features.dim()
            << " features, " << b.num_classes << " classes; splits "
            << b.train.size() << "/" << b.val.size() << "/" << b.test.size();
  if (b.graph.self_loops_dropped() > 0)
    std::cout << " (" << b.graph.self_loops_dropped()
              << " self-loops dropped)";
  std::cout << "\n";
}

void finish(const hdgl::RunReport& report, const std::string& out_path) {
  for (const auto& [key, value] : report.mean)
    std::cout << key << ": " << value << " +- " << report.stddev.at(key)
              << "\n";
  for (const auto& entry : report.sweep) {
    std::cout << "dim " << entry.dim << ":";
    for (const auto& [key, value] : entry.mean)
      std::cout << " " << key << "=" << value;
    std::cout << "\n";
  }
  if (!report.incremental.empty()) {
    for (const auto& step : report.incremental.front())
      std::cout << "t=" << step.t << " accuracy=" << step.accuracy
                << " wall=" << step.wall_seconds << "s\n";
  }
  if (!out_path.empty()) {
    hdgl::write_report(report, out_path);
    std::cout << "report written to " << out_path << "\n";
  }
}

// Rebuilds the first repeat's scorer so per-pair test records can be
// exported alongside the aggregate report.
void dump_link_scores(const hdgl::DatasetBundle& bundle,
                      const hdgl::RunConfig& cfg,
                      const std::string& scores_path) {
  const auto& links = *bundle.links;
  auto features = bundle.features;
  if (cfg.normalize_features) features.l2_normalize_rows();
  auto train_graph =
      hdgl::GraphStore::from_edges(bundle.num_nodes(), links.train_edges);
  auto embeddings = build_embeddings(
      features, train_graph, cfg, cfg.effective_dim(bundle.num_nodes()), 0);
  std::vector<hdgl::Edge> exclude(links.val_neg);
  exclude.insert(exclude.end(), links.test_neg.begin(), links.test_neg.end());
  auto neg = hdgl::sample_non_edges(bundle.graph, links.train_edges.size(),
                                    exclude, embeddings.seed);
  auto em =
      hdgl::build_edge_memory(embeddings.table, links.train_edges, neg,
                              hdgl::TieBreakPolicy::seeded(embeddings.seed));
  std::vector<hdgl::Edge> pairs(links.test_edges);
  pairs.insert(pairs.end(), links.test_neg.begin(), links.test_neg.end());
  std::vector<int> labels(links.test_edges.size(), 1);
  labels.insert(labels.end(), links.test_neg.size(), 0);
  hdgl::write_scores_tsv(score_pairs(embeddings.table, em, pairs), labels,
                         scores_path);
  std::cout << "scores written to " << scores_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-pass hyperdimensional graph learner"};
  app.require_subcommand(1);

  CommonArgs nc, lp, inc, emb;
  std::string schedule_path, scores_path;

  auto* cmd_nc =
      app.add_subcommand("nodeclass", "Transductive node classification");
  add_common(cmd_nc, nc);
  cmd_nc->add_option("--repeats", nc.cfg.repeats, "Randomized repetitions");
  cmd_nc->add_option("--normalize-features", nc.cfg.normalize_features,
                     "L2-normalize feature rows before projection");

  auto* cmd_lp =
      app.add_subcommand("linkpred", "Transductive link prediction");
  add_common(cmd_lp, lp);
  cmd_lp->add_option("--repeats", lp.cfg.repeats, "Randomized repetitions");
  cmd_lp->add_option("--dim-sweep", lp.cfg.dim_sweep,
                     "Comma-separated HD dimensions to sweep")
      ->delimiter(',');
  cmd_lp->add_option("--scores", scores_path,
                     "Also dump per-pair test scores as TSV");

  auto* cmd_inc = app.add_subcommand("incremental",
                                     "Class-incremental node classification");
  add_common(cmd_inc, inc);
  cmd_inc
      ->add_option("--schedule", schedule_path,
                   "JSON file: nested increasing label sets per step")
      ->required();

  auto* cmd_emb = app.add_subcommand("embed", "Write packed node embeddings");
  add_common(cmd_emb, emb);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_nc->parsed()) {
      auto bundle = hdgl::load_dataset(nc.data_dir);
      print_summary(bundle);
      finish(run_nodeclass(bundle, nc.cfg), nc.out_path);
    } else if (cmd_lp->parsed()) {
      auto bundle = hdgl::load_dataset(lp.data_dir);
      print_summary(bundle);
      auto report = run_linkpred(bundle, lp.cfg);
      if (!scores_path.empty() && bundle.links)
        dump_link_scores(bundle, lp.cfg, scores_path);
      finish(report, lp.out_path);
    } else if (cmd_inc->parsed()) {
      auto bundle = hdgl::load_dataset(inc.data_dir);
      print_summary(bundle);
      auto schedule = hdgl::load_schedule(schedule_path);
      finish(run_incremental(bundle, inc.cfg, schedule), inc.out_path);
    } else if (cmd_emb->parsed()) {
      if (emb.out_path.empty())
        throw std::runtime_error("embed: --out is required");
      auto bundle = hdgl::load_dataset(emb.data_dir);
      print_summary(bundle);
      auto features = bundle.features;
      if (emb.cfg.normalize_features) features.l2_normalize_rows();
      auto embeddings =
          build_embeddings(features, bundle.graph, emb.cfg,
                           emb.cfg.effective_dim(bundle.num_nodes()), 0);
      hdgl::write_embedding_dump(embeddings.table, emb.out_path);
      std::cout << "embeddings written to " << emb.out_path << " ("
                << embeddings.table.num_nodes() << " rows, dim "
                << embeddings.table.dim << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
