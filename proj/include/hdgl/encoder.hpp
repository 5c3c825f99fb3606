#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hdgl/hypervector.hpp"

namespace hdgl {

// N x d feature matrix stored as compressed sparse rows. Dense input is
// accepted and stripped to its nonzeros; projecting only the stored entries
// is bit-identical to the dense evaluation since zeros contribute exactly
// nothing to the running sum.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n_nodes, std::size_t dim);

  static FeatureMatrix from_dense(std::size_t n_nodes, std::size_t dim,
                                  std::span<const double> row_major);

  std::size_t num_nodes() const { return row_ptr_.size() - 1; }
  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return cols_.size(); }

  // Appends one entry; rows must be pushed in node order with strictly
  // increasing columns within a row.
  void push_entry(std::size_t node, std::size_t col, double value);
  // Pads out trailing all-zero rows so every node in [0, n_nodes) resolves.
  void set_num_nodes(std::size_t n_nodes);
  void finish();

  std::span<const std::uint32_t> row_cols(std::size_t node) const;
  std::span<const double> row_values(std::size_t node) const;
  std::vector<double> dense_row(std::size_t node) const;

  // Scales every row to unit L2 norm; zero rows are left untouched.
  void l2_normalize_rows();

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  bool finished_ = false;
};

// Random hyperplane tessellation: bit i of the sketch is the sign of
// q_i . x + gamma_i, where the q_i are standard normal rows and the
// gamma_i are uniform on [-lambda, lambda]. sign(0) maps to 1.
class Encoder {
 public:
  enum class Storage {
    Auto,         // materialize when the projection fits the memory budget
    Materialize,  // hold all hd_dim x d coefficients in memory
    Streamed,     // regenerate rows from the seed on every use
  };

  static Encoder fit(std::size_t input_dim, std::size_t hd_dim, double lambda,
                     std::uint64_t seed, Storage storage = Storage::Auto);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hd_dim() const { return hd_dim_; }
  double lambda() const { return lambda_; }
  std::uint64_t seed() const { return seed_; }
  bool materialized() const { return !rows_.empty(); }

  // Writes hyperplane row i (d coefficients) into `row` and its offset into
  // `gamma`. Streamed and materialized storage produce identical values.
  void projection_row(std::size_t i, std::span<double> row,
                      double& gamma) const;

  Hypervector encode(std::span<const double> x) const;
  std::vector<Hypervector> encode_all(const FeatureMatrix& features) const;

  // Builds an encoder around externally supplied coefficients (row-major
  // hd_dim x d) and offsets; used for hand-constructed projections.
  static Encoder from_matrix(std::size_t input_dim, std::size_t hd_dim,
                             std::vector<double> rows_row_major,
                             std::vector<double> gammas);

  // Byte budget under which Storage::Auto materializes.
  static constexpr std::size_t kAutoMaterializeBytes = 1ull << 30;

 private:
  Encoder() = default;
  void generate_row(std::size_t i, std::span<double> row, double& gamma) const;

  std::size_t input_dim_ = 0;
  std::size_t hd_dim_ = 0;
  double lambda_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> rows_;    // row-major hd_dim x d when materialized
  std::vector<double> gammas_;  // hd_dim offsets when materialized
};

}  // namespace hdgl
