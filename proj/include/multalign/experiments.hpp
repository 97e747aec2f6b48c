#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multalign/msd.hpp"
#include "multalign/multimodal.hpp"
#include "multalign/pipeline.hpp"
#include "multalign/rng.hpp"

namespace multalign {

struct SyntheticConfig {
  std::size_t base_nodes = 12;
  std::size_t copies = 3;
  double avg_degree = 3.0;
  std::size_t modes = 6;
  double vertex_del_p = 0.0;
  double edge_del_q = 0.0;
  std::size_t trials = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

// Single-mode template graph that the synthetic modes corrupt.
struct ReferenceGraph {
  std::size_t n = 0;
  EdgeSet edges;
};

// Erdos-Renyi base graph with the requested average degree, replicated into
// `copies` disjoint relabeled copies so the result carries deliberate
// symmetry.
ReferenceGraph gen_reference(const SyntheticConfig& cfg, Rng& rng);

struct InstancePair {
  MultimodalNetwork a;
  MultimodalNetwork b;
  std::vector<VertexId> truth;  // truth[u] = B-vertex matched to A-vertex u
};

// Per mode: delete vertices with probability p and edges with probability
// q/2 to form a mode template shared by both sides, then delete edges with
// probability q/2 independently for each instance. B's vertex ids are
// shuffled by a recorded permutation.
InstancePair gen_instance_pair(const ReferenceGraph& ref, const SyntheticConfig& cfg, Rng& rng);

// 2 * overlap / (|E_A| + |E_B|); zero when both networks are empty.
double edge_recovery(const AlignmentResult& result, const MultimodalNetwork& a,
                     const MultimodalNetwork& b);

struct RecoveryRecord {
  double p = 0.0;
  double q = 0.0;
  std::size_t modes = 0;
  std::string method;
  std::vector<double> values;  // per-trial recovery fractions
  double mean = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

RecoveryRecord make_recovery_record(double p, double q, std::size_t modes, std::string method,
                                    std::vector<double> values);

// Mean recovery of the multimodal aligner and the pairwise baseline over a
// (p, q) grid, plus the per-cell difference.
std::vector<RecoveryRecord> run_recovery_grid(const SyntheticConfig& cfg,
                                              const std::vector<double>& p_list,
                                              const std::vector<double>& q_list,
                                              const MsdConfig& msd_cfg = {});

// Recovery as a function of the number of modes at the fixed corruption
// panels (p, q).
std::vector<RecoveryRecord> run_adding_modes(
    const SyntheticConfig& cfg, const std::vector<std::size_t>& mode_counts,
    const MsdConfig& msd_cfg = {},
    const std::vector<std::pair<double, double>>& panels = {{0.1, 0.2}, {0.2, 0.1}});

enum class ModeMeasure { edge_count, vertex_count, avg_degree, triangles, density, random };

ModeMeasure parse_mode_measure(const std::string& name);
const char* to_string(ModeMeasure measure);

struct OrderingPoint {
  std::size_t modes_used = 0;
  std::size_t overlap = 0;  // evaluated on all modes
};

// Aligns using only the top-s modes under the chosen per-mode measure
// (computed on network A, descending) and evaluates the resulting matching
// on the full multimodal pair. Empty prefix_sizes means 1..m.
std::vector<OrderingPoint> run_mode_ordering(const MultimodalNetwork& a,
                                             const MultimodalNetwork& b, ModeMeasure measure,
                                             std::uint64_t random_seed = 0,
                                             std::vector<std::size_t> prefix_sizes = {},
                                             const MsdConfig& msd_cfg = {},
                                             MatcherSelect sel = MatcherSelect::all);

}  // namespace multalign
