#include "multalign/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace multalign {

void SyntheticConfig::validate() const {
  if (base_nodes == 0 || copies == 0 || modes == 0 || trials == 0) {
    throw std::invalid_argument("SyntheticConfig: counts must be positive");
  }
  if (avg_degree < 0.0) {
    throw std::invalid_argument("SyntheticConfig: avg_degree must be nonnegative");
  }
  if (vertex_del_p < 0.0 || vertex_del_p > 1.0 || edge_del_q < 0.0 || edge_del_q > 1.0) {
    throw std::invalid_argument("SyntheticConfig: probabilities must be in [0, 1]");
  }
}

ReferenceGraph gen_reference(const SyntheticConfig& cfg, Rng& rng) {
  cfg.validate();
  const double p_er =
      cfg.base_nodes > 1
          ? std::min(1.0, cfg.avg_degree / static_cast<double>(cfg.base_nodes - 1))
          : 0.0;
  EdgeSet base;
  for (VertexId i = 0; i + 1 < cfg.base_nodes; ++i) {
    for (VertexId j = i + 1; j < cfg.base_nodes; ++j) {
      if (rng.bernoulli(p_er)) base.emplace_back(i, j);
    }
  }
  ReferenceGraph ref;
  ref.n = cfg.base_nodes * cfg.copies;
  for (std::size_t c = 0; c < cfg.copies; ++c) {
    const auto offset = static_cast<VertexId>(c * cfg.base_nodes);
    for (const Edge& e : base) {
      ref.edges.emplace_back(e.first + offset, e.second + offset);
    }
  }
  std::sort(ref.edges.begin(), ref.edges.end());
  return ref;
}

InstancePair gen_instance_pair(const ReferenceGraph& ref, const SyntheticConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = ref.n;
  const double p = cfg.vertex_del_p;
  const double half_q = cfg.edge_del_q / 2.0;

  std::vector<EdgeSet> modes_a(cfg.modes), modes_b(cfg.modes);
  std::vector<bool> alive(n);
  for (std::size_t k = 0; k < cfg.modes; ++k) {
    for (std::size_t v = 0; v < n; ++v) alive[v] = !rng.bernoulli(p);
    EdgeSet tmpl;
    for (const Edge& e : ref.edges) {
      if (!alive[e.first] || !alive[e.second]) continue;
      if (rng.bernoulli(half_q)) continue;
      tmpl.push_back(e);
    }
    for (const Edge& e : tmpl) {
      if (!rng.bernoulli(half_q)) modes_a[k].push_back(e);
    }
    for (const Edge& e : tmpl) {
      if (!rng.bernoulli(half_q)) modes_b[k].push_back(e);
    }
  }

  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), VertexId{0});
  rng.shuffle(perm);

  for (EdgeSet& edges : modes_b) {
    for (Edge& e : edges) e = make_edge(perm[e.first], perm[e.second]);
    std::sort(edges.begin(), edges.end());
  }

  std::vector<std::string> labels_a, labels_b;
  labels_a.reserve(n);
  labels_b.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    labels_a.push_back("a" + std::to_string(v));
    labels_b.push_back("b" + std::to_string(v));
  }

  InstancePair out{MultimodalNetwork(std::move(labels_a), std::move(modes_a)),
                   MultimodalNetwork(std::move(labels_b), std::move(modes_b)),
                   std::move(perm)};
  return out;
}

double edge_recovery(const AlignmentResult& result, const MultimodalNetwork& a,
                     const MultimodalNetwork& b) {
  const double denom =
      static_cast<double>(a.total_edge_count() + b.total_edge_count());
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(result.overlap) / denom;
}

namespace {

double percentile(std::vector<double> sorted_values, double q) {
  if (sorted_values.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

}  // namespace

RecoveryRecord make_recovery_record(double p, double q, std::size_t modes, std::string method,
                                    std::vector<double> values) {
  RecoveryRecord rec;
  rec.p = p;
  rec.q = q;
  rec.modes = modes;
  rec.method = std::move(method);
  rec.values = std::move(values);
  if (!rec.values.empty()) {
    rec.mean = std::accumulate(rec.values.begin(), rec.values.end(), 0.0) /
               static_cast<double>(rec.values.size());
    std::vector<double> sorted = rec.values;
    std::sort(sorted.begin(), sorted.end());
    rec.p10 = percentile(sorted, 0.10);
    rec.p90 = percentile(std::move(sorted), 0.90);
  }
  return rec;
}

namespace {

struct CellOutcome {
  std::vector<double> msd;
  std::vector<double> pairwise;
  std::vector<double> difference;
};

CellOutcome run_cell(const SyntheticConfig& cfg, const MsdConfig& msd_cfg,
                     std::uint64_t cell_index) {
  CellOutcome out;
  out.msd.reserve(cfg.trials);
  out.pairwise.reserve(cfg.trials);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = Rng::derive(cfg.seed, cell_index, trial);
    const ReferenceGraph ref = gen_reference(cfg, rng);
    const InstancePair pair = gen_instance_pair(ref, cfg, rng);
    const AlignmentResult multimodal = align_multimodal(pair.a, pair.b, msd_cfg);
    const AlignmentResult baseline = align_pairwise_baseline(pair.a, pair.b, msd_cfg);
    const double r_m = edge_recovery(multimodal, pair.a, pair.b);
    const double r_p = edge_recovery(baseline, pair.a, pair.b);
    out.msd.push_back(r_m);
    out.pairwise.push_back(r_p);
    out.difference.push_back(r_m - r_p);
  }
  return out;
}

}  // namespace

std::vector<RecoveryRecord> run_recovery_grid(const SyntheticConfig& cfg,
                                              const std::vector<double>& p_list,
                                              const std::vector<double>& q_list,
                                              const MsdConfig& msd_cfg) {
  std::vector<RecoveryRecord> records;
  std::uint64_t cell_index = 0;
  for (double p : p_list) {
    for (double q : q_list) {
      SyntheticConfig cell = cfg;
      cell.vertex_del_p = p;
      cell.edge_del_q = q;
      CellOutcome outcome = run_cell(cell, msd_cfg, cell_index);
      records.push_back(make_recovery_record(p, q, cfg.modes, "msd", std::move(outcome.msd)));
      records.push_back(
          make_recovery_record(p, q, cfg.modes, "pairwise", std::move(outcome.pairwise)));
      records.push_back(
          make_recovery_record(p, q, cfg.modes, "difference", std::move(outcome.difference)));
      ++cell_index;
    }
  }
  return records;
}

std::vector<RecoveryRecord> run_adding_modes(const SyntheticConfig& cfg,
                                             const std::vector<std::size_t>& mode_counts,
                                             const MsdConfig& msd_cfg,
                                             const std::vector<std::pair<double, double>>& panels) {
  std::vector<RecoveryRecord> records;
  std::uint64_t cell_index = 0;
  for (const auto& [p, q] : panels) {
    for (std::size_t m : mode_counts) {
      SyntheticConfig cell = cfg;
      cell.vertex_del_p = p;
      cell.edge_del_q = q;
      cell.modes = m;
      CellOutcome outcome = run_cell(cell, msd_cfg, cell_index);
      records.push_back(make_recovery_record(p, q, m, "msd", std::move(outcome.msd)));
      records.push_back(make_recovery_record(p, q, m, "pairwise", std::move(outcome.pairwise)));
      records.push_back(
          make_recovery_record(p, q, m, "difference", std::move(outcome.difference)));
      ++cell_index;
    }
  }
  return records;
}

ModeMeasure parse_mode_measure(const std::string& name) {
  if (name == "edge_count") return ModeMeasure::edge_count;
  if (name == "vertex_count") return ModeMeasure::vertex_count;
  if (name == "avg_degree") return ModeMeasure::avg_degree;
  if (name == "triangles") return ModeMeasure::triangles;
  if (name == "density") return ModeMeasure::density;
  if (name == "random") return ModeMeasure::random;
  throw std::invalid_argument(
      "unknown measure '" + name +
      "' (expected edge_count|vertex_count|avg_degree|triangles|density|random)");
}

const char* to_string(ModeMeasure measure) {
  switch (measure) {
    case ModeMeasure::edge_count: return "edge_count";
    case ModeMeasure::vertex_count: return "vertex_count";
    case ModeMeasure::avg_degree: return "avg_degree";
    case ModeMeasure::triangles: return "triangles";
    case ModeMeasure::density: return "density";
    case ModeMeasure::random: return "random";
  }
  return "?";
}

std::vector<OrderingPoint> run_mode_ordering(const MultimodalNetwork& a,
                                             const MultimodalNetwork& b, ModeMeasure measure,
                                             std::uint64_t random_seed,
                                             std::vector<std::size_t> prefix_sizes,
                                             const MsdConfig& msd_cfg, MatcherSelect sel) {
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("run_mode_ordering: mode counts differ");
  }
  const std::size_t m = a.mode_count();

  // The ordering key is computed on network A; the anonymized side of an
  // aligned pair has the same structure, so either side gives the same order.
  const std::vector<ModeStats> stats = mode_statistics(a);
  std::vector<double> key(m, 0.0);
  Rng rng(random_seed);
  for (std::size_t k = 0; k < m; ++k) {
    switch (measure) {
      case ModeMeasure::edge_count: key[k] = static_cast<double>(stats[k].edge_count); break;
      case ModeMeasure::vertex_count:
        key[k] = static_cast<double>(stats[k].unique_vertex_count);
        break;
      case ModeMeasure::avg_degree: key[k] = stats[k].average_degree; break;
      case ModeMeasure::triangles: key[k] = static_cast<double>(stats[k].triangle_count); break;
      case ModeMeasure::density: key[k] = stats[k].density; break;
      case ModeMeasure::random: key[k] = rng.next_double(); break;
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return key[i] != key[j] ? key[i] > key[j] : i < j;
  });

  if (prefix_sizes.empty()) {
    prefix_sizes.resize(m);
    std::iota(prefix_sizes.begin(), prefix_sizes.end(), std::size_t{1});
  }

  std::vector<OrderingPoint> points;
  points.reserve(prefix_sizes.size());
  for (std::size_t s : prefix_sizes) {
    if (s == 0 || s > m) {
      throw std::invalid_argument("run_mode_ordering: prefix size out of range");
    }
    std::vector<EdgeSet> sub_a, sub_b;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s; ++i) {
      sub_a.push_back(a.mode(order[i]));
      sub_b.push_back(b.mode(order[i]));
      names.push_back(a.mode_names()[order[i]]);
    }
    const MultimodalNetwork na(a.vertex_labels(), std::move(sub_a), names);
    const MultimodalNetwork nb(b.vertex_labels(), std::move(sub_b), std::move(names));
    const AlignmentResult result = align_multimodal(na, nb, msd_cfg, sel);
    const OverlapReport full = multimodal_overlap(result.matching, a, b);
    points.push_back({s, full.total});
  }
  return points;
}

}  // namespace multalign
