// Command-line front end: align two multiplex edge lists, generate synthetic
// alignment problems, compute per-mode statistics, and run the recovery
// experiments with CSV output.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "multalign/experiments.hpp"
#include "multalign/matching.hpp"
#include "multalign/msd.hpp"
#include "multalign/multimodal.hpp"
#include "multalign/pipeline.hpp"

namespace fs = std::filesystem;
using namespace multalign;

namespace {

EdgeListFormat parse_format(const std::string& name) {
  if (name == "multiplex") return EdgeListFormat::multiplex;
  if (name == "routes") return EdgeListFormat::routes;
  throw CLI::ValidationError("--format", "expected 'multiplex' or 'routes'");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_alignment_tsv(const fs::path& path, const AlignmentResult& result,
                         const MultimodalNetwork& a, const MultimodalNetwork& b) {
  auto out = open_out(path);
  out << "vertex_label_A\tvertex_label_B\ty_weight\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < result.matching.pairs.size(); ++i) {
    const auto& [va, vb] = result.matching.pairs[i];
    const double w = i < result.pair_weights.size() ? result.pair_weights[i] : 0.0;
    out << a.vertex_label(va) << '\t' << b.vertex_label(vb) << '\t' << w << '\n';
  }
}

void write_summary(std::ostream& out, const std::string& label, const AlignmentResult& result) {
  out << label << "\tstrategy\t" << result.strategy << '\n';
  out << label << "\toverlap\t" << result.overlap << '\n';
  out << label << "\tmatched_vertices\t" << result.matching.pairs.size() << '\n';
  out << label << "\tseconds\t" << std::setprecision(6) << result.seconds << '\n';
  out << label << "\tper_mode_overlap";
  for (std::size_t o : result.per_mode_overlap) out << '\t' << o;
  out << '\n';
}

void dump_factors(const fs::path& dir, const LowRankFactors& f) {
  fs::create_directories(dir);
  const auto write_matrix = [&](const fs::path& path, const FactorMatrix& m) {
    auto out = open_out(path);
    for (std::size_t c = 0; c < f.column_meta.size(); ++c) {
      out << (c ? "\t" : "") << "mode" << f.column_meta[c].mode << "_pow"
          << f.column_meta[c].power;
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        out << (c ? "\t" : "") << m(r, c);
      }
      out << '\n';
    }
  };
  write_matrix(dir / "U.tsv", f.u);
  write_matrix(dir / "V.tsv", f.v);
}

void write_records_csv(const fs::path& path, const std::vector<RecoveryRecord>& records) {
  auto out = open_out(path);
  out << "p,q,m,method,trial,recovery\n";
  out << std::setprecision(10);
  for (const RecoveryRecord& rec : records) {
    for (std::size_t t = 0; t < rec.values.size(); ++t) {
      out << rec.p << ',' << rec.q << ',' << rec.modes << ',' << rec.method << ',' << t << ','
          << rec.values[t] << '\n';
    }
  }
}

int cmd_align(const std::string& a_path, const std::string& b_path, const std::string& format,
              double alpha, std::size_t iters, const std::string& matcher,
              const std::string& out_dir, const std::string& factor_dir, bool with_baseline) {
  const auto fmt = parse_format(format);
  const auto a = load_multiplex_file(a_path, fmt);
  const auto b = load_multiplex_file(b_path, fmt);
  const MsdConfig cfg{alpha, iters};
  const auto sel = parse_matcher_select(matcher);

  const auto result = align_multimodal(a, b, cfg, sel);
  if (!out_dir.empty()) fs::create_directories(out_dir);

  std::ostringstream summary;
  summary << "# overlap counts each undirected edge once per mode\n";
  write_summary(summary, "multimodal", result);
  if (with_baseline) {
    const auto baseline = align_pairwise_baseline(a, b, cfg, sel);
    write_summary(summary, "baseline", baseline);
    if (!out_dir.empty()) {
      write_alignment_tsv(fs::path(out_dir) / "baseline_alignment.tsv", baseline, a, b);
    }
  }
  std::cout << summary.str();

  if (!out_dir.empty()) {
    write_alignment_tsv(fs::path(out_dir) / "alignment.tsv", result, a, b);
    open_out(fs::path(out_dir) / "summary.tsv") << summary.str();
  }
  if (!factor_dir.empty()) {
    dump_factors(factor_dir, msd(a, b, cfg));
  }
  return 0;
}

int cmd_stats(const std::string& a_path, const std::string& format, const std::string& out_path) {
  const auto net = load_multiplex_file(a_path, parse_format(format));
  const auto stats = mode_statistics(net);
  std::ostringstream out;
  out << "mode\tname\tedge_count\tunique_vertex_count\taverage_degree\ttriangle_count\tdensity\n";
  out << std::setprecision(10);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    out << (k + 1) << '\t' << net.mode_names()[k] << '\t' << stats[k].edge_count << '\t'
        << stats[k].unique_vertex_count << '\t' << stats[k].average_degree << '\t'
        << stats[k].triangle_count << '\t' << stats[k].density << '\n';
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    open_out(out_path) << out.str();
  }
  return 0;
}

// JSON file with any subset of the SyntheticConfig fields, e.g.
// {"base_nodes": 12, "copies": 3, "avg_degree": 3, "modes": 6,
//  "vertex_del_p": 0.1, "edge_del_q": 0.2, "trials": 50, "seed": 7}
SyntheticConfig load_synthetic_config(const std::string& path, SyntheticConfig cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  cfg.base_nodes = doc.value("base_nodes", cfg.base_nodes);
  cfg.copies = doc.value("copies", cfg.copies);
  cfg.avg_degree = doc.value("avg_degree", cfg.avg_degree);
  cfg.modes = doc.value("modes", cfg.modes);
  cfg.vertex_del_p = doc.value("vertex_del_p", cfg.vertex_del_p);
  cfg.edge_del_q = doc.value("edge_del_q", cfg.edge_del_q);
  cfg.trials = doc.value("trials", cfg.trials);
  cfg.seed = doc.value("seed", cfg.seed);
  return cfg;
}

int cmd_gen(const SyntheticConfig& cfg, const std::string& out_dir) {
  Rng rng = Rng::derive(cfg.seed, 0, 0);
  const auto ref = gen_reference(cfg, rng);
  const auto pair = gen_instance_pair(ref, cfg, rng);
  fs::create_directories(out_dir);
  open_out(fs::path(out_dir) / "A.edges") << write_multiplex_edgelist(pair.a);
  open_out(fs::path(out_dir) / "B.edges") << write_multiplex_edgelist(pair.b);
  auto truth = open_out(fs::path(out_dir) / "truth.tsv");
  truth << "vertex_label_A\tvertex_label_B\n";
  for (VertexId v = 0; v < pair.a.vertex_count(); ++v) {
    truth << pair.a.vertex_label(v) << '\t' << pair.b.vertex_label(pair.truth[v]) << '\n';
  }
  std::cout << "wrote A.edges, B.edges, truth.tsv to " << out_dir << " (" << pair.a.mode_count()
            << " modes, " << pair.a.vertex_count() << " vertices)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multimodal network alignment via low-rank similarity decomposition"};
  app.require_subcommand(1);

  std::string a_path, b_path, out_dir, factor_dir, out_path;
  std::string format = "multiplex";
  std::string matcher = "all";
  double alpha = 0.9;
  std::size_t iters = 10;
  bool with_baseline = false;

  auto* align = app.add_subcommand("align", "align two multimodal networks");
  align->add_option("--a", a_path, "first network edge list")->required();
  align->add_option("--b", b_path, "second network edge list")->required();
  align->add_option("--format", format, "multiplex|routes");
  align->add_option("--alpha", alpha, "damping factor in (0,1)");
  align->add_option("--iters", iters, "power iterations");
  align->add_option("--matcher", matcher, "simple|maxweight|union|maxoverlap|all");
  align->add_option("--out", out_dir, "output directory for alignment.tsv and summary.tsv");
  align->add_option("--dump-factors", factor_dir, "directory for U.tsv and V.tsv");
  align->add_flag("--baseline", with_baseline, "also run the pairwise baseline");

  auto* stats = app.add_subcommand("stats", "per-mode graph statistics");
  stats->add_option("--a", a_path, "network edge list")->required();
  stats->add_option("--format", format, "multiplex|routes");
  stats->add_option("--out", out_path, "output TSV (default stdout)");

  SyntheticConfig gen_cfg;
  std::string gen_config_path;
  auto* gen = app.add_subcommand("gen", "generate a synthetic alignment problem");
  gen->add_option("--config", gen_config_path, "JSON config file (flags override it)");
  gen->add_option("--base-nodes", gen_cfg.base_nodes, "base graph size");
  gen->add_option("--copies", gen_cfg.copies, "identical copies joined into the reference");
  gen->add_option("--avg-degree", gen_cfg.avg_degree, "base graph average degree");
  gen->add_option("--modes", gen_cfg.modes, "number of modes");
  gen->add_option("--p", gen_cfg.vertex_del_p, "vertex deletion probability");
  gen->add_option("--q", gen_cfg.edge_del_q, "edge deletion probability");
  gen->add_option("--seed", gen_cfg.seed, "random seed");
  gen->add_option("--out", out_dir, "output directory")->required();

  auto* exp = app.add_subcommand("exp", "recovery experiments");
  exp->require_subcommand(1);

  SyntheticConfig exp_cfg;
  std::vector<double> p_list{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> q_list{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  auto* grid = exp->add_subcommand("grid", "recovery over a (p,q) grid");
  grid->add_option("--p-list", p_list, "vertex deletion values");
  grid->add_option("--q-list", q_list, "edge deletion values");
  grid->add_option("--trials", exp_cfg.trials, "trials per cell");
  grid->add_option("--modes", exp_cfg.modes, "number of modes");
  grid->add_option("--seed", exp_cfg.seed, "random seed");
  grid->add_option("--alpha", alpha, "damping factor");
  grid->add_option("--iters", iters, "power iterations");
  grid->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::size_t> mode_counts{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto* modes_cmd = exp->add_subcommand("modes", "recovery while adding modes");
  modes_cmd->add_option("--mode-counts", mode_counts, "mode counts to test");
  modes_cmd->add_option("--trials", exp_cfg.trials, "trials per point");
  modes_cmd->add_option("--seed", exp_cfg.seed, "random seed");
  modes_cmd->add_option("--alpha", alpha, "damping factor");
  modes_cmd->add_option("--iters", iters, "power iterations");
  modes_cmd->add_option("--out", out_dir, "output directory")->required();

  std::string measure = "edge_count";
  std::uint64_t random_seed = 0;
  std::vector<std::size_t> prefix_sizes;
  auto* ordering = exp->add_subcommand("ordering", "overlap vs number of modes used");
  ordering->add_option("--a", a_path, "first network edge list")->required();
  ordering->add_option("--b", b_path, "second network edge list")->required();
  ordering->add_option("--format", format, "multiplex|routes");
  ordering->add_option("--measure", measure,
                       "edge_count|vertex_count|avg_degree|triangles|density|random");
  ordering->add_option("--random-seed", random_seed, "seed for the random measure");
  ordering->add_option("--sizes", prefix_sizes, "prefix sizes (default 1..m)");
  ordering->add_option("--matcher", matcher, "simple|maxweight|union|maxoverlap|all");
  ordering->add_option("--alpha", alpha, "damping factor");
  ordering->add_option("--iters", iters, "power iterations");
  ordering->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (align->parsed()) {
      return cmd_align(a_path, b_path, format, alpha, iters, matcher, out_dir, factor_dir,
                       with_baseline);
    }
    if (stats->parsed()) {
      return cmd_stats(a_path, format, out_path);
    }
    if (gen->parsed()) {
      if (!gen_config_path.empty()) {
        const SyntheticConfig file_cfg = load_synthetic_config(gen_config_path, SyntheticConfig{});
        if (!gen->count("--base-nodes")) gen_cfg.base_nodes = file_cfg.base_nodes;
        if (!gen->count("--copies")) gen_cfg.copies = file_cfg.copies;
        if (!gen->count("--avg-degree")) gen_cfg.avg_degree = file_cfg.avg_degree;
        if (!gen->count("--modes")) gen_cfg.modes = file_cfg.modes;
        if (!gen->count("--p")) gen_cfg.vertex_del_p = file_cfg.vertex_del_p;
        if (!gen->count("--q")) gen_cfg.edge_del_q = file_cfg.edge_del_q;
        if (!gen->count("--seed")) gen_cfg.seed = file_cfg.seed;
      }
      gen_cfg.validate();
      return cmd_gen(gen_cfg, out_dir);
    }
    if (grid->parsed()) {
      exp_cfg.validate();
      const auto records = run_recovery_grid(exp_cfg, p_list, q_list, MsdConfig{alpha, iters});
      fs::create_directories(out_dir);
      write_records_csv(fs::path(out_dir) / "grid.csv", records);
      std::cout << "wrote grid.csv (" << records.size() << " records)\n";
      return 0;
    }
    if (modes_cmd->parsed()) {
      exp_cfg.validate();
      const auto records = run_adding_modes(exp_cfg, mode_counts, MsdConfig{alpha, iters});
      fs::create_directories(out_dir);
      write_records_csv(fs::path(out_dir) / "modes.csv", records);
      std::cout << "wrote modes.csv (" << records.size() << " records)\n";
      return 0;
    }
    if (ordering->parsed()) {
      const auto fmt = parse_format(format);
      const auto a = load_multiplex_file(a_path, fmt);
      const auto b = load_multiplex_file(b_path, fmt);
      const auto points =
          run_mode_ordering(a, b, parse_mode_measure(measure), random_seed, prefix_sizes,
                            MsdConfig{alpha, iters}, parse_matcher_select(matcher));
      fs::create_directories(out_dir);
      auto out = open_out(fs::path(out_dir) / "ordering.csv");
      out << "measure,modes_used,overlap\n";
      for (const auto& pt : points) {
        out << measure << ',' << pt.modes_used << ',' << pt.overlap << '\n';
      }
      std::cout << "wrote ordering.csv (" << points.size() << " points)\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
