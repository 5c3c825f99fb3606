#include "hdgl/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hdgl {

FeatureMatrix::FeatureMatrix(std::size_t n_nodes, std::size_t dim)
    : dim_(dim) {
  row_ptr_.reserve(n_nodes + 1);
}

FeatureMatrix FeatureMatrix::from_dense(std::size_t n_nodes, std::size_t dim,
                                        std::span<const double> row_major) {
  if (row_major.size() != n_nodes * dim)
    throw std::invalid_argument("FeatureMatrix::from_dense: size mismatch");
  FeatureMatrix f(n_nodes, dim);
  for (std::size_t v = 0; v < n_nodes; ++v)
    for (std::size_t j = 0; j < dim; ++j) {
      double x = row_major[v * dim + j];
      if (x != 0.0) f.push_entry(v, j, x);
    }
  f.set_num_nodes(n_nodes);
  f.finish();
  return f;
}

void FeatureMatrix::push_entry(std::size_t node, std::size_t col,
                               double value) {
  if (finished_)
    throw std::logic_error("FeatureMatrix: push_entry after finish");
  if (col >= dim_)
    throw std::invalid_argument("FeatureMatrix: column " + std::to_string(col) +
                                " out of range for dim " + std::to_string(dim_));
  if (node + 2 < row_ptr_.size())
    throw std::invalid_argument("FeatureMatrix: rows must arrive in order");
  if (!std::isfinite(value))
    throw std::invalid_argument("FeatureMatrix: non-finite feature at node " +
                                std::to_string(node));
  while (row_ptr_.size() <= node + 1) row_ptr_.push_back(cols_.size());
  if (row_ptr_[node] < cols_.size() && cols_.back() >= col)
    throw std::invalid_argument(
        "FeatureMatrix: columns must be strictly increasing within a row");
  cols_.push_back(static_cast<std::uint32_t>(col));
  vals_.push_back(value);
  row_ptr_.back() = cols_.size();
}

void FeatureMatrix::set_num_nodes(std::size_t n_nodes) {
  if (row_ptr_.size() > n_nodes + 1)
    throw std::invalid_argument("FeatureMatrix: more rows than declared");
  while (row_ptr_.size() <= n_nodes) row_ptr_.push_back(cols_.size());
}

void FeatureMatrix::finish() { finished_ = true; }

std::span<const std::uint32_t> FeatureMatrix::row_cols(std::size_t node) const {
  return std::span<const std::uint32_t>(cols_).subspan(
      row_ptr_[node], row_ptr_[node + 1] - row_ptr_[node]);
}

std::span<const double> FeatureMatrix::row_values(std::size_t node) const {
  return std::span<const double>(vals_).subspan(
      row_ptr_[node], row_ptr_[node + 1] - row_ptr_[node]);
}

std::vector<double> FeatureMatrix::dense_row(std::size_t node) const {
  std::vector<double> out(dim_, 0.0);
  auto cols = row_cols(node);
  auto vals = row_values(node);
  for (std::size_t k = 0; k < cols.size(); ++k) out[cols[k]] = vals[k];
  return out;
}

void FeatureMatrix::l2_normalize_rows() {
  for (std::size_t v = 0; v + 1 < row_ptr_.size(); ++v) {
    double sq = 0.0;
    for (std::size_t k = row_ptr_[v]; k < row_ptr_[v + 1]; ++k)
      sq += vals_[k] * vals_[k];
    if (sq == 0.0) continue;
    double inv = 1.0 / std::sqrt(sq);
    for (std::size_t k = row_ptr_[v]; k < row_ptr_[v + 1]; ++k) vals_[k] *= inv;
  }
}

Encoder Encoder::fit(std::size_t input_dim, std::size_t hd_dim, double lambda,
                     std::uint64_t seed, Storage storage) {
  if (input_dim == 0 || hd_dim == 0)
    throw std::invalid_argument("Encoder::fit: dimensions must be >= 1");
  if (lambda < 0.0)
    throw std::invalid_argument("Encoder::fit: lambda must be nonnegative");

  Encoder e;
  e.input_dim_ = input_dim;
  e.hd_dim_ = hd_dim;
  e.lambda_ = lambda;
  e.seed_ = seed;

  bool materialize = storage == Storage::Materialize;
  if (storage == Storage::Auto)
    materialize = input_dim * hd_dim * sizeof(double) <= kAutoMaterializeBytes;
  if (materialize) {
    e.rows_.resize(hd_dim * input_dim);
    e.gammas_.resize(hd_dim);
    for (std::size_t i = 0; i < hd_dim; ++i)
      e.generate_row(
          i, std::span<double>(e.rows_).subspan(i * input_dim, input_dim),
          e.gammas_[i]);
  }
  return e;
}

Encoder Encoder::from_matrix(std::size_t input_dim, std::size_t hd_dim,
                             std::vector<double> rows_row_major,
                             std::vector<double> gammas) {
  if (rows_row_major.size() != input_dim * hd_dim || gammas.size() != hd_dim)
    throw std::invalid_argument("Encoder::from_matrix: size mismatch");
  Encoder e;
  e.input_dim_ = input_dim;
  e.hd_dim_ = hd_dim;
  e.rows_ = std::move(rows_row_major);
  e.gammas_ = std::move(gammas);
  return e;
}

void Encoder::generate_row(std::size_t i, std::span<double> row,
                           double& gamma) const {
  // Each row draws from its own stream so streamed evaluation and parallel
  // materialization are bit-identical regardless of visiting order.
  RandomStream rng(derive_seed({seed_, seed_tag::kProjectionRow, i}));
  for (std::size_t j = 0; j < input_dim_; ++j) row[j] = rng.next_normal();
  gamma = lambda_ == 0.0 ? 0.0 : rng.next_uniform(-lambda_, lambda_);
}

void Encoder::projection_row(std::size_t i, std::span<double> row,
                             double& gamma) const {
  if (row.size() != input_dim_)
    throw std::invalid_argument("Encoder::projection_row: bad row length");
  if (materialized()) {
    auto src =
        std::span<const double>(rows_).subspan(i * input_dim_, input_dim_);
    std::copy(src.begin(), src.end(), row.begin());
    gamma = gammas_[i];
  } else {
    generate_row(i, row, gamma);
  }
}

Hypervector Encoder::encode(std::span<const double> x) const {
  if (x.size() != input_dim_)
    throw std::invalid_argument("Encoder::encode: feature length " +
                                std::to_string(x.size()) + " != input dim " +
                                std::to_string(input_dim_));
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("Encoder::encode: non-finite feature value");

  Hypervector out(hd_dim_);
  std::vector<double> row(input_dim_);
  double gamma = 0.0;
  for (std::size_t i = 0; i < hd_dim_; ++i) {
    projection_row(i, row, gamma);
    double dot = gamma;
    for (std::size_t j = 0; j < input_dim_; ++j) dot += row[j] * x[j];
    if (dot >= 0.0) out.set_bit(i, true);
  }
  return out;
}

std::vector<Hypervector> Encoder::encode_all(
    const FeatureMatrix& features) const {
  if (features.dim() != input_dim_)
    throw std::invalid_argument("Encoder::encode_all: feature dim " +
                                std::to_string(features.dim()) +
                                " != input dim " + std::to_string(input_dim_));
  std::size_t n = features.num_nodes();
  for (std::size_t v = 0; v < n; ++v)
    for (double x : features.row_values(v))
      if (!std::isfinite(x))
        throw std::invalid_argument(
            "Encoder::encode_all: non-finite feature at node " +
            std::to_string(v));

  std::vector<Hypervector> sketches;
  sketches.reserve(n);
  for (std::size_t v = 0; v < n; ++v) sketches.emplace_back(hd_dim_);

  // Hyperplane-major loop: each 64-row block owns one output word per node,
  // so blocks can run in parallel without write conflicts, and streamed
  // storage generates every row exactly once.
  std::size_t n_blocks = (hd_dim_ + 63) / 64;
#pragma omp parallel
  {
    std::vector<double> row(input_dim_);
#pragma omp for schedule(static)
    for (long long blk = 0; blk < static_cast<long long>(n_blocks); ++blk) {
      std::size_t row_begin = static_cast<std::size_t>(blk) * 64;
      std::size_t row_end = std::min(row_begin + 64, hd_dim_);
      for (std::size_t i = row_begin; i < row_end; ++i) {
        double gamma = 0.0;
        projection_row(i, row, gamma);
        std::uint64_t mask = std::uint64_t{1} << (i % 64);
        for (std::size_t v = 0; v < n; ++v) {
          auto cols = features.row_cols(v);
          auto vals = features.row_values(v);
          double dot = gamma;
          for (std::size_t k = 0; k < cols.size(); ++k)
            dot += row[cols[k]] * vals[k];
          if (dot >= 0.0) sketches[v].word(i / 64) |= mask;
        }
      }
    }
  }
  return sketches;
}

}  // namespace hdgl
