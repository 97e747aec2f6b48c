#include "multalign/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace multalign {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

const char* to_string(MatcherSelect sel) {
  switch (sel) {
    case MatcherSelect::simple: return "simple";
    case MatcherSelect::maxweight: return "maxweight";
    case MatcherSelect::union_matching: return "union";
    case MatcherSelect::maxoverlap: return "maxoverlap";
    case MatcherSelect::all: return "all";
  }
  return "?";
}

MatcherSelect parse_matcher_select(const std::string& name) {
  if (name == "simple") return MatcherSelect::simple;
  if (name == "maxweight") return MatcherSelect::maxweight;
  if (name == "union") return MatcherSelect::union_matching;
  if (name == "maxoverlap") return MatcherSelect::maxoverlap;
  if (name == "all") return MatcherSelect::all;
  throw std::invalid_argument("unknown matcher '" + name +
                              "' (expected simple|maxweight|union|maxoverlap|all)");
}

OverlapReport multimodal_overlap(const VertexMatching& x, const MultimodalNetwork& a,
                                 const MultimodalNetwork& b) {
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("multimodal_overlap: mode counts differ");
  }
  std::vector<std::size_t> image(a.vertex_count(), kUnset);
  std::vector<bool> b_used(b.vertex_count(), false);
  for (const auto& [va, vb] : x.pairs) {
    if (va >= a.vertex_count() || vb >= b.vertex_count()) {
      throw std::invalid_argument("multimodal_overlap: pair index out of range");
    }
    if (image[va] != kUnset || b_used[vb]) {
      throw std::invalid_argument("multimodal_overlap: matching is not 1-1");
    }
    image[va] = vb;
    b_used[vb] = true;
  }

  OverlapReport report;
  report.per_mode.assign(a.mode_count(), 0);
  for (std::size_t k = 0; k < a.mode_count(); ++k) {
    std::size_t count = 0;
    for (const Edge& e : a.mode(k)) {
      const std::size_t u = image[e.first];
      const std::size_t v = image[e.second];
      if (u == kUnset || v == kUnset) continue;
      if (b.has_edge(k, static_cast<VertexId>(u), static_cast<VertexId>(v))) ++count;
    }
    report.per_mode[k] = count;
    report.total += count;
  }
  return report;
}

VertexMatching resolve_greedy(const Matching& rows, const std::vector<double>& weights,
                              std::size_t mode_count, std::size_t n_a, std::size_t n_b,
                              std::vector<double>* out_weights) {
  if (weights.size() != rows.pairs.size()) {
    throw std::invalid_argument("resolve_greedy: weight count does not match pair count");
  }
  if (rows.n_rows != mode_count * n_a || rows.n_cols != mode_count * n_b) {
    throw std::invalid_argument("resolve_greedy: matching shape does not match row space");
  }
  std::vector<std::size_t> order(rows.pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (weights[i] != weights[j]) return weights[i] > weights[j];
    return rows.pairs[i].first < rows.pairs[j].first;
  });

  std::vector<bool> a_used(n_a, false), b_used(n_b, false);
  std::vector<std::pair<VertexId, VertexId>> accepted;
  std::vector<double> accepted_weights;
  for (std::size_t idx : order) {
    const auto va = static_cast<VertexId>(rows.pairs[idx].first % n_a);
    const auto vb = static_cast<VertexId>(rows.pairs[idx].second % n_b);
    if (a_used[va] || b_used[vb]) continue;
    a_used[va] = true;
    b_used[vb] = true;
    accepted.emplace_back(va, vb);
    accepted_weights.push_back(weights[idx]);
  }

  std::vector<std::size_t> by_vertex(accepted.size());
  std::iota(by_vertex.begin(), by_vertex.end(), std::size_t{0});
  std::sort(by_vertex.begin(), by_vertex.end(),
            [&](std::size_t i, std::size_t j) { return accepted[i] < accepted[j]; });
  VertexMatching vm;
  vm.pairs.reserve(accepted.size());
  if (out_weights) out_weights->clear();
  for (std::size_t i : by_vertex) {
    vm.pairs.push_back(accepted[i]);
    if (out_weights) out_weights->push_back(accepted_weights[i]);
  }
  return vm;
}

VertexMatching resolve_projected(const Matching& rows, const std::vector<double>& weights,
                                 std::size_t mode_count, std::size_t n_a, std::size_t n_b,
                                 std::vector<double>* out_weights) {
  if (weights.size() != rows.pairs.size()) {
    throw std::invalid_argument("resolve_projected: weight count does not match pair count");
  }
  if (rows.n_rows != mode_count * n_a || rows.n_cols != mode_count * n_b) {
    throw std::invalid_argument("resolve_projected: matching shape does not match row space");
  }
  std::vector<WeightedEdge> projected;
  projected.reserve(rows.pairs.size());
  for (std::size_t i = 0; i < rows.pairs.size(); ++i) {
    projected.push_back(
        {rows.pairs[i].first % n_a, rows.pairs[i].second % n_b, weights[i]});
  }
  const WeightedEdgeList list(n_a, n_b, std::move(projected));
  const Matching matched = exact_sparse_mwm(list);

  VertexMatching vm;
  vm.pairs.reserve(matched.pairs.size());
  if (out_weights) out_weights->clear();
  for (const auto& [va, vb] : matched.pairs) {
    vm.pairs.emplace_back(static_cast<VertexId>(va), static_cast<VertexId>(vb));
    if (out_weights) {
      const auto& edges = list.edges();
      const auto it = std::lower_bound(
          edges.begin(), edges.end(), std::pair{va, vb}, [](const WeightedEdge& e, const auto& key) {
            return e.row != key.first ? e.row < key.first : e.col < key.second;
          });
      out_weights->push_back(it != edges.end() && it->row == va && it->col == vb ? it->weight
                                                                                 : 0.0);
    }
  }
  return vm;
}

namespace {

struct RowCandidate {
  std::string tag;
  Matching rows;
};

std::vector<RowCandidate> matcher_candidates(const LowRankFactors& f, MatcherSelect sel,
                                             const MultimodalAdjacency& ma,
                                             const MultimodalAdjacency& mb) {
  std::vector<RowCandidate> out;
  const bool all = sel == MatcherSelect::all;
  if (all || sel == MatcherSelect::simple) {
    out.push_back({"simple", simple_1k(f).matching});
  }
  if (all || sel == MatcherSelect::maxweight) {
    out.push_back({"maxweight", maxweight_1k(f)});
  }
  if (all || sel == MatcherSelect::union_matching) {
    out.push_back({"union", union_1k(f)});
  }
  if (all || sel == MatcherSelect::maxoverlap) {
    out.push_back({"maxoverlap", max_overlap_select(f, ma, mb)});
  }
  return out;
}

}  // namespace

AlignmentResult align_multimodal(const MultimodalNetwork& a, const MultimodalNetwork& b,
                                 const MsdConfig& cfg, MatcherSelect sel) {
  const auto start = Clock::now();
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("align_multimodal: mode counts differ");
  }
  const std::size_t m = a.mode_count();
  const LowRankFactors f = msd(a, b, cfg);
  const MultimodalAdjacency ma = build_multimodal_adjacency(a);
  const MultimodalAdjacency mb = build_multimodal_adjacency(b);

  AlignmentResult best;
  bool have_best = false;
  for (const RowCandidate& cand : matcher_candidates(f, sel, ma, mb)) {
    const std::vector<double> weights = matching_pair_weights(cand.rows, f);
    for (int resolver = 0; resolver < 2; ++resolver) {
      std::vector<double> vertex_weights;
      VertexMatching vm =
          resolver == 0
              ? resolve_greedy(cand.rows, weights, m, a.vertex_count(), b.vertex_count(),
                               &vertex_weights)
              : resolve_projected(cand.rows, weights, m, a.vertex_count(), b.vertex_count(),
                                  &vertex_weights);
      OverlapReport rep = multimodal_overlap(vm, a, b);
      if (!have_best || rep.total > best.overlap) {
        best.matching = std::move(vm);
        best.pair_weights = std::move(vertex_weights);
        best.overlap = rep.total;
        best.per_mode_overlap = std::move(rep.per_mode);
        best.strategy = "msd+" + cand.tag + (resolver == 0 ? "+greedy" : "+projected");
        have_best = true;
      }
    }
  }
  best.seconds = seconds_since(start);
  return best;
}

AlignmentResult align_pairwise_baseline(const MultimodalNetwork& a, const MultimodalNetwork& b,
                                        const MsdConfig& cfg, MatcherSelect sel) {
  const auto start = Clock::now();
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("align_pairwise_baseline: mode counts differ");
  }

  struct SubPair {
    std::string tag;
    MultimodalNetwork sub_a;
    MultimodalNetwork sub_b;
  };
  std::vector<SubPair> subs;
  for (std::size_t k = 0; k < a.mode_count(); ++k) {
    subs.push_back({"mode" + std::to_string(k + 1),
                    MultimodalNetwork(a.vertex_labels(), {a.mode(k)}),
                    MultimodalNetwork(b.vertex_labels(), {b.mode(k)})});
  }
  subs.push_back({"smashed", smash(a), smash(b)});

  // Each sub-pair is aligned on its own, without sight of the multimodal
  // structure; only the m+1 finished alignments compete on the full overlap.
  AlignmentResult best;
  bool have_best = false;
  for (const SubPair& sub : subs) {
    AlignmentResult sub_result = align_multimodal(sub.sub_a, sub.sub_b, cfg, sel);
    OverlapReport rep = multimodal_overlap(sub_result.matching, a, b);
    if (!have_best || rep.total > best.overlap) {
      best.matching = std::move(sub_result.matching);
      best.pair_weights = std::move(sub_result.pair_weights);
      best.overlap = rep.total;
      best.per_mode_overlap = std::move(rep.per_mode);
      // Strip the leading "msd+" from the inner strategy tag.
      best.strategy = "pairwise:" + sub.tag + "+" + sub_result.strategy.substr(4);
      have_best = true;
    }
  }
  best.seconds = seconds_since(start);
  return best;
}

}  // namespace multalign
