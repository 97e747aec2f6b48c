#include "multalign/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace multalign {

namespace {

std::string describe(const Triplet& t) {
  return "(" + std::to_string(t.row) + ", " + std::to_string(t.col) + ", " +
         std::to_string(t.value) + ")";
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), col_ptr_(n_cols + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                         std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= n_rows || t.col >= n_cols) {
      throw std::out_of_range("from_triplets: index out of range for " +
                              std::to_string(n_rows) + "x" + std::to_string(n_cols) +
                              " matrix: triplet " + describe(t));
    }
    if (!std::isfinite(t.value)) {
      throw std::invalid_argument("from_triplets: non-finite value in triplet " + describe(t));
    }
  }
  // The value participates in the ordering so that duplicate coordinates are
  // summed in a canonical order regardless of the input permutation.
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    if (a.col != b.col) return a.col < b.col;
    if (a.row != b.row) return a.row < b.row;
    return a.value < b.value;
  });

  SparseMatrix m(n_rows, n_cols);
  m.row_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t i = 0;
  for (std::size_t c = 0; c < n_cols; ++c) {
    while (i < triplets.size() && triplets[i].col == c) {
      const std::size_t r = triplets[i].row;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].col == c && triplets[i].row == r) {
        sum += triplets[i].value;
        ++i;
      }
      if (sum != 0.0) {
        m.row_idx_.push_back(r);
        m.values_.push_back(sum);
      }
    }
    m.col_ptr_[c + 1] = m.row_idx_.size();
  }
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= n_rows_ || c >= n_cols_) {
    throw std::out_of_range("SparseMatrix::at: index out of range");
  }
  const auto begin = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[c]);
  const auto end = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[c + 1]);
  const auto it = std::lower_bound(begin, end, r);
  if (it == end || *it != r) return 0.0;
  return values_[static_cast<std::size_t>(it - row_idx_.begin())];
}

std::vector<Triplet> SparseMatrix::entries() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for_each([&](std::size_t r, std::size_t c, double v) { out.push_back({r, c, v}); });
  return out;
}

SparseMatrix column_normalize(const SparseMatrix& m) {
  for (double v : m.values_) {
    if (v < 0.0) {
      throw std::domain_error("column_normalize: matrix has a negative entry");
    }
  }
  SparseMatrix out = m;
  for (std::size_t c = 0; c < out.n_cols_; ++c) {
    double sum = 0.0;
    for (std::size_t k = out.col_ptr_[c]; k < out.col_ptr_[c + 1]; ++k) {
      sum += out.values_[k];
    }
    if (sum > 0.0) {
      for (std::size_t k = out.col_ptr_[c]; k < out.col_ptr_[c + 1]; ++k) {
        out.values_[k] /= sum;
      }
    }
  }
  return out;
}

DenseVector matvec(const SparseMatrix& m, const DenseVector& x) {
  if (x.size() != m.cols()) {
    throw std::invalid_argument("matvec: vector length " + std::to_string(x.size()) +
                                " does not match matrix with " + std::to_string(m.cols()) +
                                " columns");
  }
  DenseVector y(m.rows(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const double xc = x[c];
    if (xc == 0.0) continue;
    m.for_each_in_col(c, [&](std::size_t r, double v) { y[r] += v * xc; });
  }
  return y;
}

DenseVector normalize_sum(const DenseVector& x) {
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::domain_error("normalize_sum: vector has a negative or non-finite entry");
    }
  }
  const double sum = vector_sum(x);
  if (sum == 0.0) return x;
  DenseVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / sum;
  return out;
}

double vector_sum(const DenseVector& x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum;
}

}  // namespace multalign
