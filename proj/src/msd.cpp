#include "multalign/msd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace multalign {

void MsdConfig::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("MsdConfig: alpha must be in (0, 1)");
  }
  if (iterations < 1) {
    throw std::invalid_argument("MsdConfig: iterations must be at least 1");
  }
}

double DenseMatrix::sum() const {
  double total = 0.0;
  for (double v : data_) total += v;
  return total;
}

PowerIterates pagerank_powers(const MultimodalNetwork& net, const MsdConfig& cfg) {
  cfg.validate();
  const std::size_t m = net.mode_count();
  const std::size_t n = net.vertex_count();
  const std::size_t t = cfg.iterations;
  const std::size_t dim = m * n;

  const MultimodalAdjacency adj = build_multimodal_adjacency(net);
  const SparseMatrix p = column_normalize(adj.matrix);

  PowerIterates out;
  out.factors = FactorMatrix(dim, m * (t + 1));
  out.column_meta.resize(m * (t + 1));

  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    // Chain k starts uniform on mode k's block. The working iterate is kept
    // as a probability distribution; the block's 1/sqrt(m) share of the
    // similarity mass is folded into the column scale below.
    DenseVector z(dim, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      z[k * n + v] = 1.0 / static_cast<double>(n);
    }
    for (std::size_t j = 0; j <= t; ++j) {
      const double series = j < t ? (1.0 - cfg.alpha) * std::pow(cfg.alpha, static_cast<double>(j))
                                  : std::pow(cfg.alpha, static_cast<double>(t));
      const double scale = std::sqrt(series) * inv_sqrt_m;
      const std::size_t c = k * (t + 1) + j;
      auto col = out.factors.col(c);
      for (std::size_t i = 0; i < dim; ++i) col[i] = scale * z[i];
      out.column_meta[c] = {k, j, scale};
      if (j < t) {
        z = normalize_sum(matvec(p, z));
      }
    }
  }
  return out;
}

LowRankFactors msd(const MultimodalNetwork& a, const MultimodalNetwork& b, const MsdConfig& cfg) {
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("msd: mode counts differ (" + std::to_string(a.mode_count()) +
                                " vs " + std::to_string(b.mode_count()) + ")");
  }
  PowerIterates pa = pagerank_powers(a, cfg);
  PowerIterates pb = pagerank_powers(b, cfg);
  LowRankFactors f;
  f.u = std::move(pa.factors);
  f.v = std::move(pb.factors);
  f.column_meta = std::move(pa.column_meta);
  return f;
}

DenseMatrix block_uniform_similarity(std::size_t mode_count, std::size_t n_a, std::size_t n_b) {
  const double gamma = 1.0 / (static_cast<double>(mode_count) * static_cast<double>(n_a) *
                              static_cast<double>(n_b));
  DenseMatrix s(mode_count * n_a, mode_count * n_b, 0.0);
  for (std::size_t k = 0; k < mode_count; ++k) {
    for (std::size_t i = 0; i < n_a; ++i) {
      for (std::size_t j = 0; j < n_b; ++j) {
        s(k * n_a + i, k * n_b + j) = gamma;
      }
    }
  }
  return s;
}

DenseMatrix dense_isorank(const MultimodalNetwork& a, const MultimodalNetwork& b,
                          const MsdConfig& cfg, const std::optional<DenseMatrix>& similarity) {
  // Unlike the factorization, the oracle accepts iterations = 0 (returns S).
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
    throw std::invalid_argument("dense_isorank: alpha must be in (0, 1)");
  }
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("dense_isorank: mode counts differ");
  }
  const std::size_t rows = a.mode_count() * a.vertex_count();
  const std::size_t cols = b.mode_count() * b.vertex_count();
  if (rows * cols > 10'000'000) {
    throw std::invalid_argument("dense_isorank: problem too large for the dense oracle (" +
                                std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }

  DenseMatrix s;
  if (similarity.has_value()) {
    s = *similarity;
    if (s.rows() != rows || s.cols() != cols) {
      throw std::invalid_argument("dense_isorank: similarity shape mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (s(i, j) < 0.0) {
          throw std::invalid_argument("dense_isorank: similarity has a negative entry");
        }
        total += s(i, j);
      }
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("dense_isorank: similarity entries must sum to 1");
    }
  } else {
    s = block_uniform_similarity(a.mode_count(), a.vertex_count(), b.vertex_count());
  }

  const SparseMatrix p = column_normalize(build_multimodal_adjacency(a).matrix);
  const SparseMatrix q = column_normalize(build_multimodal_adjacency(b).matrix);

  DenseMatrix y = s;
  DenseMatrix py(rows, cols);
  DenseMatrix pyqt(rows, cols);
  for (std::size_t step = 0; step < cfg.iterations; ++step) {
    // py = P * y
    for (std::size_t i = 0; i < rows; ++i) {
      double* out = py.row_data(i);
      for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
    }
    p.for_each([&](std::size_t r, std::size_t c, double v) {
      const double* src = y.row_data(c);
      double* dst = py.row_data(r);
      for (std::size_t j = 0; j < cols; ++j) dst[j] += v * src[j];
    });
    // pyqt = py * Q^T, i.e. pyqt(:, r) += q(r, c) * py(:, c)
    for (std::size_t i = 0; i < rows; ++i) {
      double* out = pyqt.row_data(i);
      for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
    }
    q.for_each([&](std::size_t r, std::size_t c, double v) {
      for (std::size_t i = 0; i < rows; ++i) {
        pyqt(i, r) += v * py(i, c);
      }
    });
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        y(i, j) = cfg.alpha * pyqt(i, j) + (1.0 - cfg.alpha) * s(i, j);
      }
    }
    const double total = y.sum();
    if (total > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) y(i, j) /= total;
      }
    }
  }
  return y;
}

}  // namespace multalign
