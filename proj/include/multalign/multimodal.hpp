#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "multalign/sparse.hpp"

namespace multalign {

using VertexId = std::uint32_t;

// Undirected edge stored canonically with first <= second.
using Edge = std::pair<VertexId, VertexId>;
using EdgeSet = std::vector<Edge>;  // sorted, unique

inline Edge make_edge(VertexId a, VertexId b) {
  return a <= b ? Edge{a, b} : Edge{b, a};
}

// A shared vertex universe plus one undirected edge set per mode. Edges are
// canonicalized and deduplicated on construction; self-loops are kept and
// stored once. Immutable after construction.
class MultimodalNetwork {
 public:
  MultimodalNetwork(std::vector<std::string> vertex_labels, std::vector<EdgeSet> modes,
                    std::vector<std::string> mode_names = {});

  std::size_t vertex_count() const { return vertex_labels_.size(); }
  std::size_t mode_count() const { return modes_.size(); }
  const std::vector<std::string>& vertex_labels() const { return vertex_labels_; }
  const std::string& vertex_label(VertexId v) const { return vertex_labels_[v]; }
  const std::vector<EdgeSet>& modes() const { return modes_; }
  const EdgeSet& mode(std::size_t k) const { return modes_[k]; }
  const std::vector<std::string>& mode_names() const { return mode_names_; }

  std::size_t total_edge_count() const;
  bool has_edge(std::size_t k, VertexId a, VertexId b) const;

 private:
  std::vector<std::string> vertex_labels_;
  std::vector<EdgeSet> modes_;
  std::vector<std::string> mode_names_;  // size mode_count(), defaulted when absent
};

// Which vertices are touched by at least one edge of each mode.
struct ModePresence {
  std::vector<std::vector<bool>> in_mode;  // in_mode[k][v]

  bool present(std::size_t k, VertexId v) const { return in_mode[k][v]; }
  std::size_t count(std::size_t k) const;
};

// The m|V| x m|V| block matrix with per-mode adjacencies on the diagonal and
// 0/1 diagonal coupling blocks for vertices present in both modes. Row
// indexing is mode-major: row = mode * |V| + vertex.
struct MultimodalAdjacency {
  SparseMatrix matrix;
  std::size_t mode_count = 0;
  std::size_t vertex_count = 0;

  std::size_t row_of(std::size_t mode, VertexId v) const {
    return mode * vertex_count + v;
  }
  std::pair<std::size_t, VertexId> mode_vertex_of(std::size_t row) const {
    return {row / vertex_count, static_cast<VertexId>(row % vertex_count)};
  }
};

struct ModeStats {
  std::size_t edge_count = 0;
  std::size_t unique_vertex_count = 0;
  double average_degree = 0.0;   // 2E/u, 0 when u = 0
  std::size_t triangle_count = 0;
  double density = 0.0;          // 2E/(u(u-1)), 0 when u < 2
};

MultimodalAdjacency build_multimodal_adjacency(const MultimodalNetwork& net);
ModePresence mode_presence(const MultimodalNetwork& net);

// Single-mode network over the same vertex universe whose edge set is the
// union of all mode edge sets.
MultimodalNetwork smash(const MultimodalNetwork& net);

std::vector<ModeStats> mode_statistics(const MultimodalNetwork& net);

enum class EdgeListFormat {
  multiplex,  // layer_id node_a node_b [weight]
  routes,     // airline source dest (layer = airline token)
};

// Parses a layered edge list. Lines starting with '#' and blank lines are
// skipped; edge weights are accepted but ignored; directed duplicates are
// symmetrized away by the canonical undirected representation. Modes are
// ordered by ascending layer id (multiplex) or ascending layer token
// (routes); vertex labels are taken verbatim in order of first appearance.
MultimodalNetwork parse_multiplex_edgelist(const std::string& text,
                                           EdgeListFormat format = EdgeListFormat::multiplex);

MultimodalNetwork load_multiplex_file(const std::string& path,
                                      EdgeListFormat format = EdgeListFormat::multiplex);

// Serializes a network in the multiplex format (layer ids 1..m). Labels must
// be whitespace-free.
std::string write_multiplex_edgelist(const MultimodalNetwork& net);

}  // namespace multalign
