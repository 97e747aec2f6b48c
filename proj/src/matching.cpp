#include "multalign/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace multalign {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> argsort_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] > values[b] : a < b;
  });
  return order;
}

void check_nonnegative(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::domain_error(std::string(what) + ": negative or non-finite entry");
    }
  }
}

}  // namespace

void validate_matching(const Matching& m) {
  std::vector<bool> row_used(m.n_rows, false), col_used(m.n_cols, false);
  for (const auto& [r, c] : m.pairs) {
    if (r >= m.n_rows || c >= m.n_cols) {
      throw std::invalid_argument("Matching: pair index out of range");
    }
    if (row_used[r]) throw std::invalid_argument("Matching: row used twice");
    if (col_used[c]) throw std::invalid_argument("Matching: column used twice");
    row_used[r] = true;
    col_used[c] = true;
  }
}

WeightedEdgeList::WeightedEdgeList(std::size_t n_rows, std::size_t n_cols,
                                   std::vector<WeightedEdge> edges)
    : n_rows_(n_rows), n_cols_(n_cols) {
  for (const WeightedEdge& e : edges) {
    if (e.row >= n_rows || e.col >= n_cols) {
      throw std::out_of_range("WeightedEdgeList: edge index out of range");
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("WeightedEdgeList: weights must be finite and nonnegative");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  edges_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size();) {
    WeightedEdge merged = edges[i];
    ++i;
    while (i < edges.size() && edges[i].row == merged.row && edges[i].col == merged.col) {
      merged.weight += edges[i].weight;
      ++i;
    }
    edges_.push_back(merged);
  }
}

Matching rank1_matching(std::span<const double> u, std::span<const double> v) {
  check_nonnegative(u, "rank1_matching");
  check_nonnegative(v, "rank1_matching");
  const std::vector<std::size_t> order_u = argsort_descending(u);
  const std::vector<std::size_t> order_v = argsort_descending(v);
  Matching m;
  m.n_rows = u.size();
  m.n_cols = v.size();
  const std::size_t count = std::min(u.size(), v.size());
  m.pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    m.pairs.emplace_back(order_u[i], order_v[i]);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

double matching_weight_lowrank(const Matching& x, const LowRankFactors& f) {
  double total = 0.0;
  for (std::size_t c = 0; c < f.rank(); ++c) {
    const auto uc = f.u.col(c);
    const auto vc = f.v.col(c);
    double s = 0.0;
    for (const auto& [a, b] : x.pairs) s += uc[a] * vc[b];
    total += s;
  }
  return total;
}

std::vector<double> matching_pair_weights(const Matching& x, const LowRankFactors& f) {
  std::vector<double> weights(x.pairs.size(), 0.0);
  for (std::size_t c = 0; c < f.rank(); ++c) {
    const auto uc = f.u.col(c);
    const auto vc = f.v.col(c);
    for (std::size_t p = 0; p < x.pairs.size(); ++p) {
      weights[p] += uc[x.pairs[p].first] * vc[x.pairs[p].second];
    }
  }
  return weights;
}

namespace {

// Row-major copies of both factors so that repeated y-entry evaluations walk
// contiguous memory. Costs one extra O(n * rank) buffer per side.
struct RowMajorFactors {
  explicit RowMajorFactors(const LowRankFactors& f)
      : rank(f.rank()), u(f.u.rows() * rank), v(f.v.rows() * rank) {
    for (std::size_t c = 0; c < rank; ++c) {
      const auto uc = f.u.col(c);
      const auto vc = f.v.col(c);
      for (std::size_t i = 0; i < uc.size(); ++i) u[i * rank + c] = uc[i];
      for (std::size_t i = 0; i < vc.size(); ++i) v[i * rank + c] = vc[i];
    }
  }

  double y_entry(std::size_t a, std::size_t b) const {
    const double* ua = u.data() + a * rank;
    const double* vb = v.data() + b * rank;
    double sum = 0.0;
    for (std::size_t c = 0; c < rank; ++c) sum += ua[c] * vb[c];
    return sum;
  }

  std::size_t rank;
  std::vector<double> u;
  std::vector<double> v;
};

// Sparse successive-shortest-path assignment in min-cost form (cost = -weight).
// Each row i also has a zero-cost edge to a private virtual column C+i, so a
// row may "exit" unmatched; this keeps the problem feasible on any pattern
// and makes the optimum the true maximum-weight matching rather than a
// forced perfect one.
class SparseAssignment {
 public:
  explicit SparseAssignment(const WeightedEdgeList& input)
      : n_rows_(input.n_rows()), n_cols_(input.n_cols()) {
    const auto& edges = input.edges();
    row_ptr_.assign(n_rows_ + 1, 0);
    for (const auto& e : edges) ++row_ptr_[e.row + 1];
    for (std::size_t i = 0; i < n_rows_; ++i) row_ptr_[i + 1] += row_ptr_[i] + 1;  // +1 virtual
    col_.resize(row_ptr_[n_rows_]);
    cost_.resize(row_ptr_[n_rows_]);
    std::vector<std::size_t> fill(n_rows_, 0);
    for (const auto& e : edges) {
      const std::size_t at = row_ptr_[e.row] + fill[e.row]++;
      col_[at] = e.col;
      cost_[at] = -e.weight;
    }
    for (std::size_t i = 0; i < n_rows_; ++i) {
      const std::size_t at = row_ptr_[i] + fill[i];
      col_[at] = n_cols_ + i;  // virtual exit
      cost_[at] = 0.0;
    }
  }

  Matching solve() {
    const std::size_t all_cols = n_cols_ + n_rows_;
    v_.assign(all_cols, 0.0);
    row_match_.assign(n_rows_, kUnset);
    col_match_.assign(all_cols, kUnset);

    std::vector<std::size_t> free_rows = reduce_rows();
    free_rows = augmenting_row_reduction(free_rows);
    free_rows = augmenting_row_reduction(free_rows);

    dist_.assign(all_cols, 0.0);
    pred_.assign(all_cols, kUnset);
    seen_gen_.assign(all_cols, 0);
    done_gen_.assign(all_cols, 0);
    gen_ = 0;
    for (std::size_t f : free_rows) augment(f);

    Matching out;
    out.n_rows = n_rows_;
    out.n_cols = n_cols_;
    for (std::size_t i = 0; i < n_rows_; ++i) {
      if (row_match_[i] != kUnset && row_match_[i] < n_cols_) {
        out.pairs.emplace_back(i, row_match_[i]);
      }
    }
    return out;
  }

 private:
  // Matches every row to its cheapest column when that column is free;
  // leaves the rest for the next stages.
  std::vector<std::size_t> reduce_rows() {
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < n_rows_; ++i) {
      std::size_t best = kUnset;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
        if (cost_[e] < best_cost) {
          best_cost = cost_[e];
          best = col_[e];
        }
      }
      if (best != kUnset && col_match_[best] == kUnset) {
        row_match_[i] = best;
        col_match_[best] = i;
      } else {
        free_rows.push_back(i);
      }
    }
    return free_rows;
  }

  // One sweep of the Jonker-Volgenant augmenting row reduction: each free
  // row grabs its best column after lowering that column's price to the
  // second-best level, possibly bumping the previous owner. Bumped rows are
  // always deferred to the next sweep; the classic immediate retry can spin
  // forever on real-valued costs once the price decrement drops below the
  // representable precision.
  std::vector<std::size_t> augmenting_row_reduction(std::vector<std::size_t> queue) {
    std::vector<std::size_t> next;
    std::size_t k = 0;
    while (k < queue.size()) {
      const std::size_t i = queue[k++];
      double umin = std::numeric_limits<double>::infinity();
      double usubmin = std::numeric_limits<double>::infinity();
      std::size_t j1 = kUnset, j2 = kUnset;
      for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
        const double h = cost_[e] - v_[col_[e]];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = col_[e];
          } else {
            usubmin = umin;
            j2 = j1;
            umin = h;
            j1 = col_[e];
          }
        }
      }
      std::size_t bumped = col_match_[j1];
      if (umin < usubmin) {
        if (std::isfinite(usubmin)) v_[j1] -= usubmin - umin;
      } else if (bumped != kUnset) {
        j1 = j2;
        bumped = col_match_[j1];
      }
      row_match_[i] = j1;
      col_match_[j1] = i;
      if (bumped != kUnset) next.push_back(bumped);
    }
    return next;
  }

  struct HeapItem {
    double dist;
    std::size_t col;
    bool operator>(const HeapItem& o) const {
      return dist != o.dist ? dist > o.dist : col > o.col;
    }
  };

  // Shortest augmenting path from free row f over reduced costs, then dual
  // update and augmentation along the predecessor chain.
  void augment(std::size_t f) {
    ++gen_;
    heap_.clear();
    ready_.clear();

    const auto relax = [&](std::size_t row, double base, std::size_t e) {
      const std::size_t j = col_[e];
      if (done_gen_[j] == gen_) return;
      const double nd = base + cost_[e] - v_[j];
      if (seen_gen_[j] != gen_ || nd < dist_[j]) {
        seen_gen_[j] = gen_;
        dist_[j] = nd;
        pred_[j] = row;
        heap_.push_back({nd, j});
        std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
      }
    };

    for (std::size_t e = row_ptr_[f]; e < row_ptr_[f + 1]; ++e) relax(f, 0.0, e);

    std::size_t endofpath = kUnset;
    double delta = 0.0;
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
      const HeapItem top = heap_.back();
      heap_.pop_back();
      const std::size_t j = top.col;
      if (done_gen_[j] == gen_ || top.dist > dist_[j]) continue;  // stale
      done_gen_[j] = gen_;
      ready_.push_back(j);
      if (col_match_[j] == kUnset) {
        endofpath = j;
        delta = dist_[j];
        break;
      }
      const std::size_t i = col_match_[j];
      const double ui = matched_reduced_cost(i);
      for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
        relax(i, dist_[j] - ui, e);
      }
    }
    // A free virtual column is always reachable from f.
    if (endofpath == kUnset) {
      throw std::logic_error("exact_sparse_mwm: augmentation failed");
    }

    for (std::size_t j : ready_) v_[j] += dist_[j] - delta;

    std::size_t j = endofpath;
    while (true) {
      const std::size_t i = pred_[j];
      col_match_[j] = i;
      const std::size_t next_j = row_match_[i];
      row_match_[i] = j;
      if (i == f) break;
      j = next_j;
    }
  }

  double matched_reduced_cost(std::size_t i) const {
    const std::size_t j = row_match_[i];
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      if (col_[e] == j) return cost_[e] - v_[j];
    }
    throw std::logic_error("exact_sparse_mwm: matched edge missing from row");
  }

  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> cost_;

  std::vector<double> v_;
  std::vector<std::size_t> row_match_;
  std::vector<std::size_t> col_match_;

  std::vector<double> dist_;
  std::vector<std::size_t> pred_;
  std::vector<std::uint32_t> seen_gen_;
  std::vector<std::uint32_t> done_gen_;
  std::uint32_t gen_ = 0;
  std::vector<HeapItem> heap_;
  std::vector<std::size_t> ready_;
};

}  // namespace

Matching exact_sparse_mwm(const WeightedEdgeList& edges) {
  SparseAssignment solver(edges);
  return solver.solve();
}

Simple1kResult simple_1k(const LowRankFactors& f) {
  if (f.rank() == 0) {
    throw std::invalid_argument("simple_1k: factors have rank 0");
  }
  Simple1kResult result;
  result.factor_weights.resize(f.rank());
  std::vector<double> su, sv;
  for (std::size_t c = 0; c < f.rank(); ++c) {
    const auto uc = f.u.col(c);
    const auto vc = f.v.col(c);
    check_nonnegative(uc, "simple_1k");
    check_nonnegative(vc, "simple_1k");
    su.assign(uc.begin(), uc.end());
    sv.assign(vc.begin(), vc.end());
    std::sort(su.begin(), su.end(), std::greater<>{});
    std::sort(sv.begin(), sv.end(), std::greater<>{});
    double w = 0.0;
    const std::size_t count = std::min(su.size(), sv.size());
    for (std::size_t i = 0; i < count; ++i) w += su[i] * sv[i];
    result.factor_weights[c] = w;
  }
  result.selected = 0;
  for (std::size_t c = 1; c < f.rank(); ++c) {
    if (result.factor_weights[c] > result.factor_weights[result.selected]) {
      result.selected = c;
    }
  }
  result.matching = rank1_matching(f.u.col(result.selected), f.v.col(result.selected));
  return result;
}

Matching maxweight_1k(const LowRankFactors& f) {
  if (f.rank() == 0) {
    throw std::invalid_argument("maxweight_1k: factors have rank 0");
  }
  const RowMajorFactors rm(f);
  Matching best;
  double best_weight = -1.0;
  for (std::size_t c = 0; c < f.rank(); ++c) {
    Matching x = rank1_matching(f.u.col(c), f.v.col(c));
    double w = 0.0;
    for (const auto& [a, b] : x.pairs) w += rm.y_entry(a, b);
    if (w > best_weight) {
      best_weight = w;
      best = std::move(x);
    }
  }
  return best;
}

Matching union_1k(const LowRankFactors& f) {
  if (f.rank() == 0) {
    throw std::invalid_argument("union_1k: factors have rank 0");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pool;
  for (std::size_t c = 0; c < f.rank(); ++c) {
    const Matching x = rank1_matching(f.u.col(c), f.v.col(c));
    pool.insert(pool.end(), x.pairs.begin(), x.pairs.end());
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const RowMajorFactors rm(f);
  std::vector<WeightedEdge> edges;
  edges.reserve(pool.size());
  for (const auto& [a, b] : pool) {
    const double w = rm.y_entry(a, b);
    if (w > 0.0) edges.push_back({a, b, w});
  }
  return exact_sparse_mwm(WeightedEdgeList(f.u.rows(), f.v.rows(), std::move(edges)));
}

double row_level_overlap(const Matching& x, const MultimodalAdjacency& ma,
                         const MultimodalAdjacency& mb) {
  if (x.n_rows != ma.matrix.rows() || x.n_cols != mb.matrix.rows()) {
    throw std::invalid_argument("row_level_overlap: dimension mismatch");
  }
  std::vector<std::size_t> matched_to(ma.matrix.rows(), kUnset);
  for (const auto& [a, b] : x.pairs) matched_to[a] = b;
  double count = 0.0;
  ma.matrix.for_each([&](std::size_t a, std::size_t a2, double val) {
    if (val == 0.0) return;
    const std::size_t b = matched_to[a];
    const std::size_t b2 = matched_to[a2];
    if (b == kUnset || b2 == kUnset) return;
    if (mb.matrix.at(b, b2) != 0.0) count += 1.0;
  });
  return count / 2.0;
}

Matching max_overlap_select(const LowRankFactors& f, const MultimodalAdjacency& ma,
                            const MultimodalAdjacency& mb) {
  if (f.rank() == 0) {
    throw std::invalid_argument("max_overlap_select: factors have rank 0");
  }
  if (f.u.rows() != ma.matrix.rows() || f.v.rows() != mb.matrix.rows()) {
    throw std::invalid_argument("max_overlap_select: factor/adjacency dimension mismatch");
  }
  Matching best;
  double best_overlap = -1.0;
  for (std::size_t c = 0; c < f.rank(); ++c) {
    Matching x = rank1_matching(f.u.col(c), f.v.col(c));
    const double o = row_level_overlap(x, ma, mb);
    if (o > best_overlap) {
      best_overlap = o;
      best = std::move(x);
    }
  }
  return best;
}

}  // namespace multalign
