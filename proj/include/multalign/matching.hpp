#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "multalign/msd.hpp"
#include "multalign/multimodal.hpp"

namespace multalign {

// A 1-1 assignment between row indices and column indices. Pairs are kept
// sorted by row.
struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
};

// Throws when a row or column repeats or an index is out of range.
void validate_matching(const Matching& m);

struct WeightedEdge {
  std::size_t row = 0;
  std::size_t col = 0;
  double weight = 0.0;
};

// Sparse set of candidate assignment edges. Duplicate coordinates are summed
// on construction; weights must be finite and nonnegative.
class WeightedEdgeList {
 public:
  WeightedEdgeList(std::size_t n_rows, std::size_t n_cols, std::vector<WeightedEdge> edges);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }  // sorted by (row, col)

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<WeightedEdge> edges_;
};

// Maximum-weight matching of the rank-1 matrix u v^T: sorts both vectors in
// decreasing order (ties by ascending index) and pairs components rank by
// rank, including zero-valued tails. Requires nonnegative vectors.
Matching rank1_matching(std::span<const double> u, std::span<const double> v);
inline Matching rank1_matching(const DenseVector& u, const DenseVector& v) {
  return rank1_matching(std::span<const double>(u), std::span<const double>(v));
}

// Weight of a matching in the full matrix u v^T, computed from the factors
// only (O(|pairs| * rank)).
double matching_weight_lowrank(const Matching& x, const LowRankFactors& f);

// The y-value of each matched pair, aligned with x.pairs.
std::vector<double> matching_pair_weights(const Matching& x, const LowRankFactors& f);

// Exact maximum-weight bipartite matching on a sparse edge set. Augmenting
// shortest-path search with dual potentials; every row also carries an
// implicit zero-weight exit so the matching need not be perfect.
Matching exact_sparse_mwm(const WeightedEdgeList& edges);

struct Simple1kResult {
  Matching matching;
  std::vector<double> factor_weights;  // weight of each rank-1 matching in its own factor
  std::size_t selected = 0;
};

// Best rank-1 matching judged by its weight within its own factor. The
// winner is a 1/rank approximation to the maximum-weight matching of u v^T.
Simple1kResult simple_1k(const LowRankFactors& f);

// Best rank-1 matching judged by its weight in the full matrix u v^T.
Matching maxweight_1k(const LowRankFactors& f);

// Exact matching over the union of all rank-1 matchings' pairs, each pair
// weighted by its u v^T value (zero-weight pairs are dropped).
Matching union_1k(const LowRankFactors& f);

// Rank-1 matching whose row-level overlap between the two multimodal
// adjacencies is largest.
Matching max_overlap_select(const LowRankFactors& f, const MultimodalAdjacency& ma,
                            const MultimodalAdjacency& mb);

// (1/2) sum over matched row pairs (a,b),(a',b') of M(a,a') * N(b,b'); the
// halving undoes the symmetric double count of undirected entries.
double row_level_overlap(const Matching& x, const MultimodalAdjacency& ma,
                         const MultimodalAdjacency& mb);

}  // namespace multalign
