#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multalign/matching.hpp"
#include "multalign/msd.hpp"
#include "multalign/multimodal.hpp"

namespace multalign {

// 1-1 assignment between the vertex sets of two networks, sorted by the
// first network's vertex index.
struct VertexMatching {
  std::vector<std::pair<VertexId, VertexId>> pairs;
};

struct OverlapReport {
  std::size_t total = 0;
  std::vector<std::size_t> per_mode;
};

enum class MatcherSelect { simple, maxweight, union_matching, maxoverlap, all };

const char* to_string(MatcherSelect sel);
MatcherSelect parse_matcher_select(const std::string& name);

struct AlignmentResult {
  VertexMatching matching;
  std::vector<double> pair_weights;  // similarity weight backing each pair
  std::size_t overlap = 0;
  std::vector<std::size_t> per_mode_overlap;
  std::string strategy;
  double seconds = 0.0;
};

// Number of edges of each A-mode mapped onto edges of the same B-mode by the
// matching; every undirected edge counts once.
OverlapReport multimodal_overlap(const VertexMatching& x, const MultimodalNetwork& a,
                                 const MultimodalNetwork& b);

// Projects a row-level matching to vertices by scanning pairs in descending
// weight order (ties by ascending row) and keeping each pair whose two
// endpoints are still free.
VertexMatching resolve_greedy(const Matching& rows, const std::vector<double>& weights,
                              std::size_t mode_count, std::size_t n_a, std::size_t n_b,
                              std::vector<double>* out_weights = nullptr);

// Projects all row pairs to a weighted vertex-level bipartite graph
// (duplicate pair weights summed) and runs the exact sparse matcher on it.
VertexMatching resolve_projected(const Matching& rows, const std::vector<double>& weights,
                                 std::size_t mode_count, std::size_t n_a, std::size_t n_b,
                                 std::vector<double>* out_weights = nullptr);

// Full multimodal alignment: factorization, the selected matcher variants,
// both conflict resolvers, and argmax-overlap selection among candidates.
AlignmentResult align_multimodal(const MultimodalNetwork& a, const MultimodalNetwork& b,
                                 const MsdConfig& cfg,
                                 MatcherSelect sel = MatcherSelect::all);

// Baseline that ignores multimodal structure while aligning: one single-mode
// alignment per mode plus one for the smashed union graph, each evaluated on
// the full multimodal pair; the best candidate wins.
AlignmentResult align_pairwise_baseline(const MultimodalNetwork& a, const MultimodalNetwork& b,
                                        const MsdConfig& cfg,
                                        MatcherSelect sel = MatcherSelect::all);

}  // namespace multalign
