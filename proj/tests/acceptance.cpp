// Acceptance suite: runs every acceptance check and prints one line per
// criterion. Exit status is nonzero when any non-skipped criterion fails.
//
// Usage: acceptance [criterion-number...]
//
// The airport criterion needs the two multiplex files of the European air
// network (anonymized and original). Point MULTALIGN_AIR_A and
// MULTALIGN_AIR_B at them (optionally MULTALIGN_AIR_FORMAT=multiplex|routes);
// it is skipped with a note when the files are absent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sys/resource.h>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "multalign/experiments.hpp"
#include "multalign/matching.hpp"
#include "multalign/msd.hpp"
#include "multalign/multimodal.hpp"
#include "multalign/pipeline.hpp"
#include "multalign/rng.hpp"

using namespace multalign;
using Clock = std::chrono::steady_clock;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

Outcome pass(std::string detail) { return {true, false, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, false, std::move(detail)}; }
Outcome skip(std::string detail) { return {false, true, std::move(detail)}; }

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

std::size_t peak_rss_kb() {
  struct rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return static_cast<std::size_t>(usage.ru_maxrss);
}

// ---------------------------------------------------------------------------
// 1. Factorization fidelity: UV^T equals the dense iteration oracle.

MultimodalNetwork random_full_presence_network(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<EdgeSet> modes(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (VertexId i = 0; i + 1 < n; ++i) {
      for (VertexId j = i + 1; j < n; ++j) {
        if (rng.bernoulli(0.35)) modes[k].emplace_back(i, j);
      }
    }
    std::vector<bool> touched(n, false);
    for (const Edge& e : modes[k]) touched[e.first] = touched[e.second] = true;
    for (VertexId v = 0; v < n; ++v) {
      if (touched[v]) continue;
      auto other = static_cast<VertexId>(rng.next_index(n - 1));
      if (other >= v) ++other;
      modes[k].push_back(make_edge(v, other));
    }
  }
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v) labels.push_back("v" + std::to_string(v));
  return MultimodalNetwork(std::move(labels), std::move(modes));
}

Outcome criterion_factorization() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int tr = 0; tr < 20; ++tr) {
    Rng rng = Rng::derive(101, 0, static_cast<std::uint64_t>(tr));
    const std::size_t m = 1 + rng.next_index(3);
    const std::size_t na = 4 + rng.next_index(9);   // up to 12
    const std::size_t nb = 4 + rng.next_index(9);
    const std::size_t t = 1 + rng.next_index(8);    // up to 8
    const auto a = random_full_presence_network(rng, na, m);
    const auto b = random_full_presence_network(rng, nb, m);
    const MsdConfig cfg{0.9, t};
    const auto f = msd(a, b, cfg);
    const auto oracle = dense_isorank(a, b, cfg);
    for (std::size_t i = 0; i < oracle.rows(); ++i) {
      for (std::size_t j = 0; j < oracle.cols(); ++j) {
        worst = std::max(worst, std::abs(f.y_entry(i, j) - oracle(i, j)));
      }
    }
  }
  const double elapsed = secs_since(t0);
  if (worst > 1e-10) return fail("max |UV^T - dense| = " + fmt(worst) + " > 1e-10");
  if (elapsed >= 10.0) return fail("took " + fmt(elapsed) + "s >= 10s");
  return pass("max |UV^T - dense| = " + fmt(worst) + " over 20 pairs, " + fmt(elapsed) + "s");
}

// ---------------------------------------------------------------------------
// 2. The 1/k bound and the dominance chain.

double exhaustive_best(const LowRankFactors& f) {
  const std::size_t nr = f.u.rows(), nc = f.v.rows();
  std::vector<double> y(nr * nc, 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) y[i * nc + j] = f.y_entry(i, j);
  }
  // Assign each row of the smaller side a distinct column of the larger one.
  const bool flip = nr > nc;
  const std::size_t small = flip ? nc : nr, large = flip ? nr : nc;
  std::vector<bool> used(large, false);
  double best = 0.0;
  const auto value = [&](std::size_t s, std::size_t l) {
    return flip ? y[l * nc + s] : y[s * nc + l];
  };
  const auto rec = [&](auto&& self, std::size_t s, double acc) -> void {
    if (s == small) {
      best = std::max(best, acc);
      return;
    }
    for (std::size_t l = 0; l < large; ++l) {
      if (used[l]) continue;
      used[l] = true;
      self(self, s + 1, acc + value(s, l));
      used[l] = false;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

Outcome criterion_bound() {
  const auto t0 = Clock::now();
  for (int tr = 0; tr < 200; ++tr) {
    Rng rng = Rng::derive(202, 0, static_cast<std::uint64_t>(tr));
    const std::size_t n = 2 + rng.next_index(7);  // up to 8
    const std::size_t r = 1 + rng.next_index(4);  // up to 4
    LowRankFactors f;
    f.u = FactorMatrix(n, r);
    f.v = FactorMatrix(n, r);
    f.column_meta.resize(r);
    for (std::size_t c = 0; c < r; ++c) {
      f.column_meta[c] = {0, c, 1.0};
      for (std::size_t i = 0; i < n; ++i) f.u(i, c) = rng.next_double();
      for (std::size_t i = 0; i < n; ++i) f.v(i, c) = rng.next_double();
    }
    const double optimum = exhaustive_best(f);
    const auto simple = simple_1k(f);
    const double f_star = simple.factor_weights[simple.selected];
    if (f_star < optimum / static_cast<double>(r) - 1e-9) {
      return fail("trial " + std::to_string(tr) + ": f*=" + fmt(f_star) + " < optimum/r=" +
                  fmt(optimum / static_cast<double>(r)));
    }
    const double w_simple = matching_weight_lowrank(simple.matching, f);
    const double w_maxweight = matching_weight_lowrank(maxweight_1k(f), f);
    const double w_union = matching_weight_lowrank(union_1k(f), f);
    if (w_maxweight < w_simple - 1e-12 || w_union < w_maxweight - 1e-12) {
      return fail("trial " + std::to_string(tr) + ": dominance chain broken (" + fmt(w_simple) +
                  ", " + fmt(w_maxweight) + ", " + fmt(w_union) + ")");
    }
  }
  const double elapsed = secs_since(t0);
  if (elapsed >= 30.0) return fail("took " + fmt(elapsed) + "s >= 30s");
  return pass("200 trials, bound and chain hold, " + fmt(elapsed) + "s");
}

// ---------------------------------------------------------------------------
// 3. Rank-1 exactness.

Outcome criterion_rank1() {
  for (int tr = 0; tr < 200; ++tr) {
    Rng rng = Rng::derive(303, 0, static_cast<std::uint64_t>(tr));
    const std::size_t nu = 1 + rng.next_index(8);
    const std::size_t nv = 1 + rng.next_index(8);
    LowRankFactors f;
    f.u = FactorMatrix(nu, 1);
    f.v = FactorMatrix(nv, 1);
    f.column_meta = {{0, 0, 1.0}};
    for (std::size_t i = 0; i < nu; ++i) f.u(i, 0) = rng.next_double();
    for (std::size_t i = 0; i < nv; ++i) f.v(i, 0) = rng.next_double();
    const double optimum = exhaustive_best(f);
    const auto m = rank1_matching(f.u.col(0), f.v.col(0));
    const double w = matching_weight_lowrank(m, f);
    if (std::abs(w - optimum) > 1e-12) {
      return fail("trial " + std::to_string(tr) + ": rank-1 weight " + fmt(w) +
                  " != optimum " + fmt(optimum));
    }
  }
  return pass("200 trials, sort matching equals the exhaustive optimum");
}

// ---------------------------------------------------------------------------
// 4. Self-alignment reaches the full overlap, with and without relabeling.

Outcome criterion_self_alignment() {
  const MsdConfig cfg{0.9, 10};
  for (int tr = 0; tr < 20; ++tr) {
    SyntheticConfig gen;
    gen.modes = 6;
    gen.vertex_del_p = 0.1;
    gen.edge_del_q = 0.2;
    gen.seed = 400 + static_cast<std::uint64_t>(tr);
    Rng rng = Rng::derive(gen.seed, 0, 0);
    const auto ref = gen_reference(gen, rng);
    const auto pair = gen_instance_pair(ref, gen, rng);
    const auto& a = pair.a;
    const std::size_t full = a.total_edge_count();

    const auto self = align_multimodal(a, a, cfg);
    if (self.overlap != full) {
      return fail("seed " + std::to_string(gen.seed) + ": self overlap " +
                  std::to_string(self.overlap) + " != " + std::to_string(full));
    }

    std::vector<VertexId> perm(a.vertex_count());
    std::iota(perm.begin(), perm.end(), VertexId{0});
    rng.shuffle(perm);
    std::vector<EdgeSet> modes;
    for (const EdgeSet& edges : a.modes()) {
      EdgeSet mapped;
      for (const Edge& e : edges) mapped.push_back(make_edge(perm[e.first], perm[e.second]));
      modes.push_back(std::move(mapped));
    }
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < a.vertex_count(); ++v) labels.push_back("s" + std::to_string(v));
    const MultimodalNetwork shuffled(std::move(labels), std::move(modes));
    const auto relabeled = align_multimodal(a, shuffled, cfg);
    if (relabeled.overlap != full) {
      return fail("seed " + std::to_string(gen.seed) + ": shuffled overlap " +
                  std::to_string(relabeled.overlap) + " != " + std::to_string(full));
    }
  }
  return pass("20 networks, plain and relabeled self-alignment both reach the edge total");
}

// ---------------------------------------------------------------------------
// 5. Synthetic regime: multimodal wins under heavy vertex deletion, ties
//    under heavy edge deletion.

Outcome criterion_regimes() {
  const auto t0 = Clock::now();
  SyntheticConfig cfg;  // 12x3 nodes, 6 modes, 50 trials
  const MsdConfig msd_cfg{0.9, 10};

  const auto high_vertex = run_recovery_grid(cfg, {0.4}, {0.1}, msd_cfg);
  const double msd_hv = high_vertex[0].mean;
  const double pw_hv = high_vertex[1].mean;

  const auto high_edge = run_recovery_grid(cfg, {0.0}, {0.4}, msd_cfg);
  const double msd_he = high_edge[0].mean;
  const double pw_he = high_edge[1].mean;

  const double elapsed = secs_since(t0);
  std::string detail = "(p,q)=(0.4,0.1): msd " + fmt(msd_hv) + " vs pairwise " + fmt(pw_hv) +
                       "; (0.0,0.4): " + fmt(msd_he) + " vs " + fmt(pw_he) + "; " +
                       fmt(elapsed) + "s";
  if (msd_hv - pw_hv < 0.05) {
    return fail("high vertex deletion margin " + fmt(msd_hv - pw_hv) + " < 0.05; " + detail);
  }
  if (std::abs(msd_he - pw_he) > 0.15) {
    return fail("high edge deletion gap " + fmt(std::abs(msd_he - pw_he)) + " > 0.15; " + detail);
  }
  if (elapsed >= 900.0) return fail("took " + fmt(elapsed) + "s >= 15min");
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 6. Adding modes helps.

Outcome criterion_adding_modes() {
  const auto t0 = Clock::now();
  SyntheticConfig cfg;
  const std::vector<std::size_t> counts = {2, 4, 6, 8};
  const auto records = run_adding_modes(cfg, counts, MsdConfig{0.9, 10}, {{0.1, 0.2}});

  std::vector<double> means;
  for (const RecoveryRecord& rec : records) {
    if (rec.method == "msd") means.push_back(rec.mean);
  }
  if (means.size() != counts.size()) return fail("unexpected record layout");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double x = static_cast<double>(counts[i]);
    sx += x;
    sy += means[i];
    sxx += x * x;
    sxy += x * means[i];
  }
  const double n = static_cast<double>(counts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  const double elapsed = secs_since(t0);
  std::string detail = "means m=2..8: " + fmt(means[0]) + ", " + fmt(means[1]) + ", " +
                       fmt(means[2]) + ", " + fmt(means[3]) + "; slope " + fmt(slope) + "; " +
                       fmt(elapsed) + "s";
  if (means[3] - means[0] < 0.05) {
    return fail("m=8 minus m=2 margin " + fmt(means[3] - means[0]) + " < 0.05; " + detail);
  }
  if (slope <= 0.0) return fail("slope not positive; " + detail);
  if (elapsed >= 900.0) return fail("took " + fmt(elapsed) + "s >= 15min");
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 7. Airport de-anonymization (needs the external dataset).

Outcome criterion_airports() {
  const char* a_path = std::getenv("MULTALIGN_AIR_A");
  const char* b_path = std::getenv("MULTALIGN_AIR_B");
  if (a_path == nullptr || b_path == nullptr) {
    return skip("set MULTALIGN_AIR_A and MULTALIGN_AIR_B to the two multiplex files");
  }
  const char* fmt_env = std::getenv("MULTALIGN_AIR_FORMAT");
  const EdgeListFormat format = (fmt_env != nullptr && std::string(fmt_env) == "routes")
                                    ? EdgeListFormat::routes
                                    : EdgeListFormat::multiplex;
  const auto t0 = Clock::now();
  const auto a = load_multiplex_file(a_path, format);
  const auto b = load_multiplex_file(b_path, format);
  const MsdConfig cfg{0.9, 10};

  std::string detail = std::to_string(a.mode_count()) + " modes, " +
                       std::to_string(a.vertex_count()) + "/" +
                       std::to_string(b.vertex_count()) + " airports, " +
                       std::to_string(a.total_edge_count()) + " edges;";
  bool ok = true;
  for (const MatcherSelect sel :
       {MatcherSelect::maxweight, MatcherSelect::union_matching, MatcherSelect::maxoverlap}) {
    const auto result = align_multimodal(a, b, cfg, sel);
    detail += std::string(" ") + to_string(sel) + "=" + std::to_string(result.overlap);
    if (result.overlap != 6468) ok = false;
  }

  // Smashed pairwise baseline, evaluated on the full pair.
  const auto smash_result = align_multimodal(smash(a), smash(b), cfg);
  const auto smash_overlap = multimodal_overlap(smash_result.matching, a, b).total;
  detail += " smashed=" + std::to_string(smash_overlap);
  if (smash_overlap > 6468) ok = false;

  const double elapsed = secs_since(t0);
  detail += "; " + fmt(elapsed) + "s";
  if (!ok) return fail("expected overlap 6468 for every multimodal matcher; " + detail);
  if (elapsed >= 300.0) return fail("took " + fmt(elapsed) + "s >= 5min");
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 8. Complexity envelope at n = 20000, r = 200.

Outcome criterion_envelope() {
  const std::size_t n = 20000, r = 200;
  const double factor_bytes = 2.0 * static_cast<double>(n * r) * 8.0;

  Rng rng(808);
  LowRankFactors f;
  f.u = FactorMatrix(n, r);
  f.v = FactorMatrix(n, r);
  f.column_meta.resize(r);
  for (std::size_t c = 0; c < r; ++c) {
    f.column_meta[c] = {0, c, 1.0};
    for (std::size_t i = 0; i < n; ++i) f.u(i, c) = rng.next_double();
    for (std::size_t i = 0; i < n; ++i) f.v(i, c) = rng.next_double();
  }

  // Sparse symmetric adjacency pair for the overlap-driven matcher.
  const auto random_adjacency = [&](std::uint64_t seed) {
    Rng arng(seed);
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 3; ++d) {
        const std::size_t j = arng.next_index(n);
        if (j == i) continue;
        trips.push_back({i, j, 1.0});
        trips.push_back({j, i, 1.0});
      }
    }
    MultimodalAdjacency adj;
    adj.matrix = SparseMatrix::from_triplets(n, n, std::move(trips));
    adj.mode_count = 1;
    adj.vertex_count = n;
    return adj;
  };
  const auto ma = random_adjacency(1);
  const auto mb = random_adjacency(2);

  const auto t_simple0 = Clock::now();
  const auto simple = simple_1k(f);
  const double t_simple = secs_since(t_simple0);

  const auto t_other0 = Clock::now();
  const auto mw = maxweight_1k(f);
  const auto un = union_1k(f);
  const auto mo = max_overlap_select(f, ma, mb);
  const double t_other = secs_since(t_other0);
  if (simple.matching.pairs.size() != n || mw.pairs.size() != n || mo.pairs.size() != n ||
      un.pairs.size() > n) {
    return fail("unexpected matching sizes");
  }

  const double peak_bytes = static_cast<double>(peak_rss_kb()) * 1024.0;
  if (peak_bytes <= 0.0) return fail("peak rss probe unavailable");
  const double n2_bytes = static_cast<double>(n) * static_cast<double>(n) * 8.0;
  const double limit_bytes = 1.2e9;  // far below one dense n x n buffer (3.2 GB)

  // Time a 200-row slice of the dense reconstruction and extrapolate.
  const std::size_t slice = 200;
  const auto t_slice0 = Clock::now();
  double sink = 0.0;
  for (std::size_t i = 0; i < slice; ++i) {
    for (std::size_t j = 0; j < n; ++j) sink = std::max(sink, f.y_entry(i, j));
  }
  const double t_dense_est = secs_since(t_slice0) * static_cast<double>(n) / slice;
  if (sink <= 0.0) return fail("reconstruction slice produced no values");

  std::string detail = "peak rss " + fmt(peak_bytes / 1e6) + " MB (factors " +
                       fmt(factor_bytes / 1e6) + " MB, dense would add " + fmt(n2_bytes / 1e6) +
                       " MB); simple_1k " + fmt(t_simple) + "s vs dense reconstruction est " +
                       fmt(t_dense_est) + "s; other variants " + fmt(t_other) + "s";
  if (peak_bytes > limit_bytes) {
    return fail("peak rss exceeds the O(nr) envelope; " + detail);
  }
  if (t_dense_est < 10.0 * t_simple) {
    return fail("simple_1k not 10x faster than dense reconstruction; " + detail);
  }
  return pass(detail);
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria = {
      {1, "factorization-fidelity", criterion_factorization},
      {2, "one-over-k-bound", criterion_bound},
      {3, "rank1-exactness", criterion_rank1},
      {4, "self-alignment", criterion_self_alignment},
      {5, "synthetic-regimes", criterion_regimes},
      {6, "adding-modes", criterion_adding_modes},
      {7, "airport-deanonymization", criterion_airports},
      {8, "complexity-envelope", criterion_envelope},
  };

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  bool all_ok = true;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.number) == wanted.end()) {
      continue;
    }
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const char* status = outcome.skipped ? "SKIP" : (outcome.pass ? "PASS" : "FAIL");
    std::cout << status << "  " << c.number << ". " << c.name << " — " << outcome.detail
              << std::endl;
    if (!outcome.pass && !outcome.skipped) all_ok = false;
  }
  return all_ok ? 0 : 1;
}
