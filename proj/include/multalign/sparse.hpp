#pragma once

#include <cstddef>
#include <vector>

namespace multalign {

// Dense vector of 64-bit reals. All stored values are expected to be finite.
using DenseVector = std::vector<double>;

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

// Immutable sparse matrix in compressed-sparse-column form. Duplicate
// coordinates in the input triplets are summed and entries whose final value
// is zero are dropped, so only structural nonzeros are stored. Instances are
// safe to share across threads after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // All-zero matrix of the given shape.
  SparseMatrix(std::size_t n_rows, std::size_t n_cols);

  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<Triplet> triplets);

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  // Value at (r, c); zero when no entry is stored there.
  double at(std::size_t r, std::size_t c) const;

  // All stored entries ordered by (col, row).
  std::vector<Triplet> entries() const;

  // Visits the entries of column c as f(row, value), rows ascending.
  template <typename F>
  void for_each_in_col(std::size_t c, F&& f) const {
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      f(row_idx_[k], values_[k]);
    }
  }

  // Visits every stored entry as f(row, col, value) in column-major order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t c = 0; c < n_cols_; ++c) {
      for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
        f(row_idx_[k], c, values_[k]);
      }
    }
  }

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> col_ptr_ = {0};
  std::vector<std::size_t> row_idx_;
  std::vector<double> values_;

  friend SparseMatrix column_normalize(const SparseMatrix& m);
};

// Divides every column with a nonzero sum by that sum; all-zero columns are
// left all-zero. Requires a nonnegative matrix.
SparseMatrix column_normalize(const SparseMatrix& m);

// Sparse matrix-vector product; x.size() must equal m.cols().
DenseVector matvec(const SparseMatrix& m, const DenseVector& x);

// Scales a nonnegative vector to sum 1; the zero vector is returned as-is.
DenseVector normalize_sum(const DenseVector& x);

double vector_sum(const DenseVector& x);

}  // namespace multalign
