#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "multalign/multimodal.hpp"
#include "multalign/sparse.hpp"

namespace multalign {

struct MsdConfig {
  double alpha = 0.9;
  std::size_t iterations = 10;  // t

  void validate() const;
};

// Column-major dense matrix used for the low-rank factors.
class FactorMatrix {
 public:
  FactorMatrix() = default;
  FactorMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Provenance of one factor column: which mode's chain produced it, which
// power of the walk it holds, and the scalar folded into the stored values.
struct FactorColumnMeta {
  std::size_t mode = 0;
  std::size_t power = 0;
  double scale = 0.0;
};

struct PowerIterates {
  FactorMatrix factors;  // m|V| x m(t+1)
  std::vector<FactorColumnMeta> column_meta;
};

// Aligned nonnegative factor pair: column c of u and column c of v come from
// the same (mode, power) chain, and u * v^T reconstructs the similarity
// iterate for the network pair.
struct LowRankFactors {
  FactorMatrix u;
  FactorMatrix v;
  std::vector<FactorColumnMeta> column_meta;

  std::size_t rank() const { return column_meta.size(); }

  // One entry of u * v^T, O(rank).
  double y_entry(std::size_t a, std::size_t b) const {
    double sum = 0.0;
    for (std::size_t c = 0; c < rank(); ++c) {
      sum += u(a, c) * v(b, c);
    }
    return sum;
  }
};

// Per-mode PageRank power chains on the column-normalized multimodal
// adjacency. Each chain k starts from the uniform distribution on the rows
// of mode k's block and keeps its mass through the iteration; the 1/sqrt(m)
// share of the block-uniform similarity and the alpha-series weights live in
// the per-column scale. Chains whose mass reaches empty columns are rescaled
// back to a distribution.
PowerIterates pagerank_powers(const MultimodalNetwork& net, const MsdConfig& cfg);

// The multimodal similarity decomposition of a network pair with a shared
// mode alignment: u from A's chains, v from B's chains.
LowRankFactors msd(const MultimodalNetwork& a, const MultimodalNetwork& b, const MsdConfig& cfg);

// Small row-major dense matrix, used by the explicit iteration oracle.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double* row_data(std::size_t r) { return data_.data() + r * cols_; }
  const double* row_data(std::size_t r) const { return data_.data() + r * cols_; }
  double sum() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Block-uniform similarity with all entries summing to 1 (gamma on the m
// diagonal vertex blocks, zero elsewhere).
DenseMatrix block_uniform_similarity(std::size_t mode_count, std::size_t n_a, std::size_t n_b);

// Explicit t-step iteration Y <- alpha P Y Q^T + (1-alpha) S starting from
// Y = S, rescaling Y back to a probability distribution after each step.
// Materializes the dense iterate, so it is guarded to small problems
// (m|V_A| * m|V_B| <= 10^7); intended as a verification oracle only.
DenseMatrix dense_isorank(const MultimodalNetwork& a, const MultimodalNetwork& b,
                          const MsdConfig& cfg,
                          const std::optional<DenseMatrix>& similarity = std::nullopt);

}  // namespace multalign
