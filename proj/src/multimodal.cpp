#include "multalign/multimodal.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace multalign {

MultimodalNetwork::MultimodalNetwork(std::vector<std::string> vertex_labels,
                                     std::vector<EdgeSet> modes,
                                     std::vector<std::string> mode_names)
    : vertex_labels_(std::move(vertex_labels)),
      modes_(std::move(modes)),
      mode_names_(std::move(mode_names)) {
  if (modes_.empty()) {
    throw std::invalid_argument("MultimodalNetwork: at least one mode is required");
  }
  {
    std::unordered_set<std::string> seen;
    for (const std::string& label : vertex_labels_) {
      if (!seen.insert(label).second) {
        throw std::invalid_argument("MultimodalNetwork: duplicate vertex label '" + label + "'");
      }
    }
  }
  const std::size_t n = vertex_labels_.size();
  for (EdgeSet& edges : modes_) {
    for (Edge& e : edges) {
      if (e.first >= n || e.second >= n) {
        throw std::invalid_argument("MultimodalNetwork: edge references vertex index out of range");
      }
      e = make_edge(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  if (mode_names_.empty()) {
    mode_names_.reserve(modes_.size());
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      mode_names_.push_back("mode" + std::to_string(k + 1));
    }
  } else if (mode_names_.size() != modes_.size()) {
    throw std::invalid_argument("MultimodalNetwork: mode_names size does not match mode count");
  }
}

std::size_t MultimodalNetwork::total_edge_count() const {
  std::size_t total = 0;
  for (const EdgeSet& edges : modes_) total += edges.size();
  return total;
}

bool MultimodalNetwork::has_edge(std::size_t k, VertexId a, VertexId b) const {
  const Edge e = make_edge(a, b);
  const EdgeSet& edges = modes_[k];
  return std::binary_search(edges.begin(), edges.end(), e);
}

ModePresence mode_presence(const MultimodalNetwork& net) {
  ModePresence p;
  p.in_mode.assign(net.mode_count(), std::vector<bool>(net.vertex_count(), false));
  for (std::size_t k = 0; k < net.mode_count(); ++k) {
    for (const Edge& e : net.mode(k)) {
      p.in_mode[k][e.first] = true;
      p.in_mode[k][e.second] = true;
    }
  }
  return p;
}

std::size_t ModePresence::count(std::size_t k) const {
  return static_cast<std::size_t>(std::count(in_mode[k].begin(), in_mode[k].end(), true));
}

MultimodalAdjacency build_multimodal_adjacency(const MultimodalNetwork& net) {
  const std::size_t n = net.vertex_count();
  const std::size_t m = net.mode_count();
  const ModePresence presence = mode_presence(net);

  std::vector<Triplet> triplets;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t base = k * n;
    for (const Edge& e : net.mode(k)) {
      triplets.push_back({base + e.first, base + e.second, 1.0});
      if (e.first != e.second) {
        triplets.push_back({base + e.second, base + e.first, 1.0});
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t v = 0; v < n; ++v) {
        if (presence.in_mode[i][v] && presence.in_mode[j][v]) {
          triplets.push_back({i * n + v, j * n + v, 1.0});
          triplets.push_back({j * n + v, i * n + v, 1.0});
        }
      }
    }
  }

  MultimodalAdjacency adj;
  adj.matrix = SparseMatrix::from_triplets(m * n, m * n, std::move(triplets));
  adj.mode_count = m;
  adj.vertex_count = n;
  return adj;
}

MultimodalNetwork smash(const MultimodalNetwork& net) {
  EdgeSet all;
  all.reserve(net.total_edge_count());
  for (const EdgeSet& edges : net.modes()) {
    all.insert(all.end(), edges.begin(), edges.end());
  }
  return MultimodalNetwork(net.vertex_labels(), {std::move(all)}, {"smashed"});
}

std::vector<ModeStats> mode_statistics(const MultimodalNetwork& net) {
  const std::size_t n = net.vertex_count();
  std::vector<ModeStats> stats;
  stats.reserve(net.mode_count());
  for (std::size_t k = 0; k < net.mode_count(); ++k) {
    const EdgeSet& edges = net.mode(k);
    ModeStats s;
    s.edge_count = edges.size();

    std::vector<bool> touched(n, false);
    std::vector<std::vector<VertexId>> nbrs(n);
    for (const Edge& e : edges) {
      touched[e.first] = true;
      touched[e.second] = true;
      if (e.first != e.second) {
        nbrs[e.first].push_back(e.second);
        nbrs[e.second].push_back(e.first);
      }
    }
    s.unique_vertex_count =
        static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
    for (auto& list : nbrs) std::sort(list.begin(), list.end());

    // Each triangle {a < b < c} is counted once, from its (a, b) edge.
    std::size_t triangles = 0;
    for (const Edge& e : edges) {
      if (e.first == e.second) continue;
      const auto& na = nbrs[e.first];
      const auto& nb = nbrs[e.second];
      auto ia = std::lower_bound(na.begin(), na.end(), e.second + 1);
      auto ib = std::lower_bound(nb.begin(), nb.end(), e.second + 1);
      while (ia != na.end() && ib != nb.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          ++triangles;
          ++ia;
          ++ib;
        }
      }
    }
    s.triangle_count = triangles;

    const double u = static_cast<double>(s.unique_vertex_count);
    const double e2 = 2.0 * static_cast<double>(s.edge_count);
    s.average_degree = s.unique_vertex_count == 0 ? 0.0 : e2 / u;
    s.density = s.unique_vertex_count < 2 ? 0.0 : e2 / (u * (u - 1.0));
    stats.push_back(s);
  }
  return stats;
}

namespace {

struct ParsedEdge {
  std::size_t mode = 0;  // resolved after layer keys are sorted
  std::string a, b;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

long parse_layer_id(const std::string& tok, std::size_t line_no) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "layer id '" + tok + "' is not an integer");
  }
  if (value <= 0) {
    parse_fail(line_no, "unknown layer reference '" + tok + "' (layer ids are positive)");
  }
  return value;
}

void check_weight_token(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    (void)std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
  } catch (const std::exception&) {
    parse_fail(line_no, "weight '" + tok + "' is not numeric");
  }
}

}  // namespace

MultimodalNetwork parse_multiplex_edgelist(const std::string& text, EdgeListFormat format) {
  // Layer keys: numeric for multiplex, lexicographic token for routes. Both
  // orderings give the same mode alignment when two files share layer keys.
  std::map<long, std::size_t> int_layers;
  std::map<std::string, std::size_t> str_layers;
  std::vector<std::pair<std::string, ParsedEdge>> raw;  // (layer key string, edge)

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;

    ParsedEdge e;
    std::string key;
    if (format == EdgeListFormat::multiplex) {
      if (tokens.size() < 3 || tokens.size() > 4) {
        parse_fail(line_no, "expected 'layer_id node_a node_b [weight]', got " +
                                std::to_string(tokens.size()) + " fields");
      }
      const long layer = parse_layer_id(tokens[0], line_no);
      if (tokens.size() == 4) check_weight_token(tokens[3], line_no);
      int_layers.emplace(layer, 0);
      key = tokens[0];
      e.a = tokens[1];
      e.b = tokens[2];
      raw.emplace_back(std::to_string(layer), e);
    } else {
      if (tokens.size() != 3) {
        parse_fail(line_no, "expected 'airline source dest', got " +
                                std::to_string(tokens.size()) + " fields");
      }
      str_layers.emplace(tokens[0], 0);
      e.a = tokens[1];
      e.b = tokens[2];
      raw.emplace_back(tokens[0], e);
    }
  }
  if (raw.empty()) {
    throw std::runtime_error("parse error: no edges found (no modes)");
  }

  std::size_t mode_count = 0;
  std::vector<std::string> mode_names;
  if (format == EdgeListFormat::multiplex) {
    for (auto& [id, idx] : int_layers) {
      idx = mode_count++;
      mode_names.push_back(std::to_string(id));
    }
  } else {
    for (auto& [id, idx] : str_layers) {
      idx = mode_count++;
      mode_names.push_back(id);
    }
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, VertexId> index_of;
  const auto intern = [&](const std::string& label) {
    const auto it = index_of.find(label);
    if (it != index_of.end()) return it->second;
    const auto id = static_cast<VertexId>(labels.size());
    labels.push_back(label);
    index_of.emplace(label, id);
    return id;
  };

  std::vector<EdgeSet> modes(mode_count);
  for (const auto& [key, e] : raw) {
    std::size_t mode;
    if (format == EdgeListFormat::multiplex) {
      mode = int_layers.at(std::stol(key));
    } else {
      mode = str_layers.at(key);
    }
    const VertexId ia = intern(e.a);
    const VertexId ib = intern(e.b);
    modes[mode].push_back(make_edge(ia, ib));
  }
  return MultimodalNetwork(std::move(labels), std::move(modes), std::move(mode_names));
}

MultimodalNetwork load_multiplex_file(const std::string& path, EdgeListFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_multiplex_edgelist(buf.str(), format);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string write_multiplex_edgelist(const MultimodalNetwork& net) {
  for (const std::string& label : net.vertex_labels()) {
    if (label.empty() || label.find_first_of(" \t\r\n") != std::string::npos) {
      throw std::invalid_argument("write_multiplex_edgelist: label '" + label +
                                  "' is empty or contains whitespace");
    }
  }
  std::ostringstream out;
  for (std::size_t k = 0; k < net.mode_count(); ++k) {
    for (const Edge& e : net.mode(k)) {
      out << (k + 1) << ' ' << net.vertex_label(e.first) << ' ' << net.vertex_label(e.second)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace multalign
