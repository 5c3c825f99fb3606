#include "hdgl/dataset.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hdgl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& file, std::size_t line,
                       const std::string& what) {
  throw std::runtime_error(file.filename().string() + ":" +
                           std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_dataset: missing file " + path.string());
  return in;
}

long parse_long(const std::string& tok, const std::filesystem::path& file,
                std::size_t line) {
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0')
    fail(file, line, "expected integer, got '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const std::filesystem::path& file,
                    std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    fail(file, line, "expected number, got '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, delim)) out.push_back(tok);
  return out;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

std::vector<Edge> read_edge_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::istringstream ss(line);
    long u, v;
    if (!(ss >> u >> v)) fail(path, lineno, "expected 'u<TAB>v'");
    std::string rest;
    if (ss >> rest) fail(path, lineno, "trailing token '" + rest + "'");
    if (u < 0 || v < 0) fail(path, lineno, "negative node id");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

// Dense CSV: one row per node, d columns.
FeatureMatrix read_dense_features(const std::filesystem::path& path,
                                  std::size_t& n_rows) {
  auto in = open_or_throw(path);
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  FeatureMatrix f;
  std::size_t node = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto toks = split(line, ',');
    if (dim == 0) {
      dim = toks.size();
      f = FeatureMatrix(0, dim);
    } else if (toks.size() != dim) {
      fail(path, lineno,
           "row has " + std::to_string(toks.size()) + " columns, expected " +
               std::to_string(dim));
    }
    for (std::size_t j = 0; j < toks.size(); ++j) {
      double x = parse_double(toks[j], path, lineno);
      if (x != 0.0) f.push_entry(node, j, x);
    }
    ++node;
  }
  if (dim == 0) fail(path, 1, "no feature rows");
  n_rows = node;
  return f;
}

// COO triples; rows and columns may arrive in any order.
FeatureMatrix read_coo_features(const std::filesystem::path& path,
                                std::size_t n_nodes) {
  auto in = open_or_throw(path);
  std::string line;
  std::size_t lineno = 0;
  struct Entry {
    std::size_t node, col;
    double value;
  };
  std::vector<Entry> entries;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto toks = split(line, ',');
    if (toks.size() != 3) fail(path, lineno, "expected 'node,col,value'");
    long node = parse_long(toks[0], path, lineno);
    long col = parse_long(toks[1], path, lineno);
    double value = parse_double(toks[2], path, lineno);
    if (node < 0 || col < 0) fail(path, lineno, "negative index");
    if (static_cast<std::size_t>(node) >= n_nodes)
      fail(path, lineno,
           "node " + std::to_string(node) + " out of range for " +
               std::to_string(n_nodes) + " nodes");
    entries.push_back({static_cast<std::size_t>(node),
                       static_cast<std::size_t>(col), value});
    dim = std::max(dim, static_cast<std::size_t>(col) + 1);
  }
  if (entries.empty()) fail(path, 1, "no feature entries");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.node != b.node ? a.node < b.node : a.col < b.col;
  });
  FeatureMatrix f(n_nodes, dim);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].node == entries[i - 1].node &&
        entries[i].col == entries[i - 1].col)
      throw std::runtime_error("features.coo: duplicate entry for node " +
                               std::to_string(entries[i].node) + ", col " +
                               std::to_string(entries[i].col));
    f.push_entry(entries[i].node, entries[i].col, entries[i].value);
  }
  return f;
}

json read_json(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.filename().string() + ": " + e.what());
  }
  return j;
}

std::vector<NodeId> node_array(const json& j, const std::string& key,
                               std::size_t n_nodes, const std::string& file) {
  if (!j.contains(key))
    throw std::runtime_error(file + ": missing key '" + key + "'");
  std::vector<NodeId> out;
  for (const auto& v : j.at(key)) {
    long id = v.get<long>();
    if (id < 0 || static_cast<std::size_t>(id) >= n_nodes)
      throw std::runtime_error(file + ": node " + std::to_string(id) +
                               " out of range in '" + key + "'");
    out.push_back(static_cast<NodeId>(id));
  }
  return out;
}

std::vector<Edge> edge_array(const json& j, const std::string& key,
                             std::size_t n_nodes, const std::string& file) {
  if (!j.contains(key))
    throw std::runtime_error(file + ": missing key '" + key + "'");
  std::vector<Edge> out;
  for (const auto& pair : j.at(key)) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::runtime_error(file + ": '" + key +
                               "' entries must be [u, v] pairs");
    long u = pair[0].get<long>();
    long v = pair[1].get<long>();
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_nodes ||
        static_cast<std::size_t>(v) >= n_nodes)
      throw std::runtime_error(file + ": edge out of range in '" + key + "'");
    out.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return out;
}

Edge canonical(Edge e) {
  return e.first < e.second ? e : Edge{e.second, e.first};
}

}  // namespace

std::vector<Labeled> DatasetBundle::labeled_train_val() const {
  std::vector<Labeled> out;
  out.reserve(train.size() + val.size());
  for (NodeId v : train) out.push_back({v, labels[v]});
  for (NodeId v : val) out.push_back({v, labels[v]});
  return out;
}

std::vector<Labeled> DatasetBundle::labeled_test() const {
  std::vector<Labeled> out;
  out.reserve(test.size());
  for (NodeId v : test) out.push_back({v, labels[v]});
  return out;
}

DatasetBundle load_dataset(const std::filesystem::path& dir) {
  auto edges = read_edge_file(dir / "graph.edges");

  auto labels_path = dir / "labels.tsv";
  auto in = open_or_throw(labels_path);
  std::vector<std::pair<long, long>> label_pairs;
  {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (blank(line)) continue;
      std::istringstream ss(line);
      long node, label;
      if (!(ss >> node >> label))
        fail(labels_path, lineno, "expected 'node<TAB>label'");
      if (node < 0) fail(labels_path, lineno, "negative node id");
      if (label < 0)
        fail(labels_path, lineno,
             "label " + std::to_string(label) + " outside universe 0..L-1");
      label_pairs.emplace_back(node, label);
    }
  }

  // Node count: dense feature rows are authoritative; otherwise one past
  // the largest id referenced anywhere.
  std::size_t max_ref = 0;
  for (const auto& [u, v] : edges)
    max_ref = std::max<std::size_t>({max_ref, u, v});
  for (const auto& [node, label] : label_pairs)
    max_ref = std::max(max_ref, static_cast<std::size_t>(node));

  bool dense = std::filesystem::exists(dir / "features.dense");
  bool coo = std::filesystem::exists(dir / "features.coo");
  if (dense == coo)
    throw std::runtime_error(
        "load_dataset: exactly one of features.dense / features.coo must be "
        "present");

  DatasetBundle b;
  std::size_t n_nodes;
  if (dense) {
    std::size_t rows = 0;
    b.features = read_dense_features(dir / "features.dense", rows);
    if (rows < max_ref + 1)
      throw std::runtime_error(
          "load_dataset: features.dense has " + std::to_string(rows) +
          " rows but node ids reference " + std::to_string(max_ref + 1) +
          " nodes");
    n_nodes = rows;
  } else {
    n_nodes = max_ref + 1;
    b.features = read_coo_features(dir / "features.coo", n_nodes);
  }
  b.features.set_num_nodes(n_nodes);
  b.features.finish();

  b.graph = GraphStore::from_edges(n_nodes, edges);

  b.labels.assign(n_nodes, -1);
  long max_label = -1;
  for (const auto& [node, label] : label_pairs) {
    if (b.labels[node] != -1 && b.labels[node] != static_cast<int>(label))
      throw std::runtime_error("labels.tsv: conflicting labels for node " +
                               std::to_string(node));
    b.labels[node] = static_cast<int>(label);
    max_label = std::max(max_label, label);
  }
  b.num_classes = static_cast<int>(max_label + 1);

  auto splits = read_json(dir / "splits.json");
  b.train = node_array(splits, "train", n_nodes, "splits.json");
  b.val = node_array(splits, "val", n_nodes, "splits.json");
  b.test = node_array(splits, "test", n_nodes, "splits.json");

  std::set<NodeId> seen;
  auto check_split = [&](const std::vector<NodeId>& nodes, const char* name) {
    for (NodeId v : nodes) {
      if (!seen.insert(v).second)
        throw std::runtime_error("splits.json: node " + std::to_string(v) +
                                 " appears in more than one split (" + name +
                                 ")");
      if (b.labels[v] == -1)
        throw std::runtime_error("splits.json: " + std::string(name) +
                                 " node " + std::to_string(v) +
                                 " has no label");
    }
  };
  check_split(b.train, "train");
  check_split(b.val, "val");
  check_split(b.test, "test");

  if (std::filesystem::exists(dir / "links.json")) {
    auto j = read_json(dir / "links.json");
    LinkSplits ls;
    ls.train_edges = edge_array(j, "train_edges", n_nodes, "links.json");
    ls.val_edges = edge_array(j, "val_edges", n_nodes, "links.json");
    ls.val_neg = edge_array(j, "val_neg", n_nodes, "links.json");
    ls.test_edges = edge_array(j, "test_edges", n_nodes, "links.json");
    ls.test_neg = edge_array(j, "test_neg", n_nodes, "links.json");

    // Positive splits must partition the undirected edge set.
    std::set<Edge> split_edges;
    for (const auto* part : {&ls.train_edges, &ls.val_edges, &ls.test_edges})
      for (Edge e : *part)
        if (!split_edges.insert(canonical(e)).second)
          throw std::runtime_error(
              "links.json: edge (" + std::to_string(e.first) + "," +
              std::to_string(e.second) + ") appears in two positive splits");
    auto all_edges = b.graph.edge_list();
    if (split_edges.size() != all_edges.size() ||
        !std::equal(split_edges.begin(), split_edges.end(),
                    all_edges.begin()))
      throw std::runtime_error(
          "links.json: positive splits do not partition the edge set (" +
          std::to_string(split_edges.size()) + " split edges vs " +
          std::to_string(all_edges.size()) + " graph edges)");
    for (const auto* part : {&ls.val_neg, &ls.test_neg})
      for (Edge e : *part)
        if (b.graph.has_edge(e.first, e.second))
          throw std::runtime_error("links.json: negative pair (" +
                                   std::to_string(e.first) + "," +
                                   std::to_string(e.second) +
                                   ") is an actual edge");
    b.links = std::move(ls);
  }
  return b;
}

}  // namespace hdgl
