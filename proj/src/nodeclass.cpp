#include "hdgl/nodeclass.hpp"

#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hdgl {

namespace {

constexpr char kModelMagic[8] = {'H', 'D', 'G', 'L', 'C', 'L', 'S', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

ClassModel ClassModel::fit(const EmbeddingTable& embeddings,
                           std::span<const Labeled> labeled,
                           const TieBreakPolicy& tie,
                           std::span<const int> expected_classes) {
  if (labeled.empty())
    throw std::invalid_argument("ClassModel::fit: no labeled nodes");
  ClassModel m;
  m.dim_ = embeddings.dim;
  m.tie_ = tie;
  m.add_members(embeddings, labeled);
  for (int label : expected_classes)
    if (!m.classes_.count(label))
      throw std::invalid_argument("ClassModel::fit: class " +
                                  std::to_string(label) + " has no members");
  return m;
}

void ClassModel::add_members(const EmbeddingTable& embeddings,
                             std::span<const Labeled> new_labeled) {
  std::map<int, bool> touched;
  for (const auto& [node, label] : new_labeled) {
    if (node >= embeddings.num_nodes())
      throw std::invalid_argument("ClassModel: unknown node " +
                                  std::to_string(node));
    auto [it, inserted] = classes_.try_emplace(label);
    if (inserted) it->second.acc = BundleAccumulator(dim_);
    it->second.acc.add(embeddings[node]);
    ++it->second.members;
    touched[label] = true;
  }
  for (const auto& [label, _] : touched) rematerialize(label);
}

void ClassModel::rematerialize(int label) {
  auto& e = classes_.at(label);
  // Each class resolves its ties in a stream keyed by its own label, so the
  // materialized vector depends only on the final counters.
  e.vector = e.acc.majority(tie_.for_context(
      {seed_tag::kClassTie, static_cast<std::uint64_t>(label)}));
}

const ClassModel::Entry& ClassModel::entry(int label) const {
  auto it = classes_.find(label);
  if (it == classes_.end())
    throw std::invalid_argument("ClassModel: unknown class " +
                                std::to_string(label));
  return it->second;
}

std::vector<int> ClassModel::labels() const {
  std::vector<int> out;
  out.reserve(classes_.size());
  for (const auto& [label, _] : classes_) out.push_back(label);
  return out;
}

const Hypervector& ClassModel::class_vector(int label) const {
  return entry(label).vector;
}

std::size_t ClassModel::member_count(int label) const {
  return entry(label).members;
}

Prediction ClassModel::predict(const Hypervector& z) const {
  if (classes_.empty())
    throw std::logic_error("ClassModel::predict: model has no classes");
  Prediction p;
  double best = 2.0;
  for (const auto& [label, e] : classes_) {
    double d = hamming(z, e.vector);
    p.distances[label] = d;
    if (d < best) {  // ties keep the smallest label id (map is ordered)
      best = d;
      p.label = label;
    }
  }
  return p;
}

double ClassModel::accuracy(const EmbeddingTable& embeddings,
                            std::span<const Labeled> test) const {
  if (test.empty())
    throw std::invalid_argument("ClassModel::accuracy: empty test set");
  std::size_t correct = 0;
  for (const auto& [node, label] : test) {
    if (node >= embeddings.num_nodes())
      throw std::invalid_argument("ClassModel::accuracy: unknown node " +
                                  std::to_string(node));
    if (predict(embeddings[node]).label == label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

void ClassModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("ClassModel::save: cannot open " + path.string());
  out.write(kModelMagic, 8);
  write_u64(out, dim_);
  write_u64(out, classes_.size());
  write_u64(out, static_cast<std::uint64_t>(tie_.kind));
  write_u64(out, tie_.seed);
  for (const auto& [label, e] : classes_) {
    write_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(label)));
    write_u64(out, e.members);
    for (std::int32_t c : e.acc.counts())
      write_u64(out, static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));
  }
  if (!out) throw std::runtime_error("ClassModel::save: write failed");
}

ClassModel ClassModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("ClassModel::load: cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string_view(magic, 8) != std::string_view(kModelMagic, 8))
    throw std::runtime_error("ClassModel::load: bad magic");
  ClassModel m;
  m.dim_ = read_u64(in);
  std::uint64_t n_classes = read_u64(in);
  m.tie_.kind = static_cast<TieBreakPolicy::Kind>(read_u64(in));
  m.tie_.seed = read_u64(in);
  for (std::uint64_t c = 0; c < n_classes; ++c) {
    int label = static_cast<int>(static_cast<std::int64_t>(read_u64(in)));
    Entry e;
    e.members = read_u64(in);
    std::vector<std::int32_t> counts(m.dim_);
    for (auto& count : counts)
      count = static_cast<std::int32_t>(static_cast<std::uint32_t>(read_u64(in)));
    e.acc = BundleAccumulator::from_counts(std::move(counts), e.members);
    m.classes_.emplace(label, std::move(e));
    m.rematerialize(label);
  }
  if (!in) throw std::runtime_error("ClassModel::load: truncated file");
  return m;
}

bool ClassModel::operator==(const ClassModel& other) const {
  if (dim_ != other.dim_ || classes_.size() != other.classes_.size())
    return false;
  if (tie_.kind != other.tie_.kind || tie_.seed != other.tie_.seed)
    return false;
  for (const auto& [label, e] : classes_) {
    auto it = other.classes_.find(label);
    if (it == other.classes_.end()) return false;
    if (e.members != it->second.members || e.acc != it->second.acc ||
        e.vector != it->second.vector)
      return false;
  }
  return true;
}

}  // namespace hdgl
