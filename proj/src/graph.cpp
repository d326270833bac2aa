#include "cyclespan/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace cyclespan {

const char* to_string(Orientation o) {
  return o == Orientation::kDirected ? "directed" : "undirected";
}

namespace {

// Builds CSR offsets/targets from (source, target) pairs.
void build_csr(Vertex n, const std::vector<Edge>& arcs,
               std::vector<std::size_t>& off, std::vector<Vertex>& adj) {
  off.assign(std::size_t{n} + 1, 0);
  for (const auto& [u, v] : arcs) ++off[u + 1];
  for (Vertex v = 0; v < n; ++v) off[v + 1] += off[v];
  adj.resize(arcs.size());
  std::vector<std::size_t> cursor(off.begin(), off.end() - 1);
  for (const auto& [u, v] : arcs) adj[cursor[u]++] = v;
  for (Vertex v = 0; v < n; ++v) {
    std::sort(adj.begin() + static_cast<std::ptrdiff_t>(off[v]),
              adj.begin() + static_cast<std::ptrdiff_t>(off[v + 1]));
  }
}

}  // namespace

Graph::Graph(Vertex n, Orientation orientation, bool multigraph,
             std::vector<Edge> edges)
    : n_(n), orientation_(orientation), multigraph_(multigraph),
      edges_(std::move(edges)) {
  for (auto& [u, v] : edges_) {
    if (u >= n_ || v >= n_) {
      throw ValidationError("edge (" + std::to_string(u) + "," +
                            std::to_string(v) + ") has an endpoint outside [0," +
                            std::to_string(n_) + ")");
    }
    if (!multigraph_ && u == v) {
      throw ValidationError("loop at vertex " + std::to_string(u) +
                            " in a simple graph");
    }
    if (!directed() && u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (!multigraph_) {
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
      throw ValidationError("repeated edge (" + std::to_string(dup->first) +
                            "," + std::to_string(dup->second) +
                            ") in a simple graph");
    }
  }

  std::vector<Edge> arcs;
  arcs.reserve(directed() ? edges_.size() : 2 * edges_.size());
  for (const auto& [u, v] : edges_) {
    arcs.emplace_back(u, v);
    if (!directed()) arcs.emplace_back(v, u);
  }
  build_csr(n_, arcs, out_off_, out_adj_);
  if (directed()) {
    for (auto& [u, v] : arcs) std::swap(u, v);
    build_csr(n_, arcs, in_off_, in_adj_);
  }
}

std::span<const Vertex> Graph::in_neighbors(Vertex v) const {
  if (!directed()) return out_neighbors(v);
  return {in_adj_.data() + in_off_[v], in_adj_.data() + in_off_[v + 1]};
}

std::size_t Graph::multiplicity(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) return 0;
  auto nbrs = out_neighbors(u);
  auto [lo, hi] = std::equal_range(nbrs.begin(), nbrs.end(), v);
  auto count = static_cast<std::size_t>(hi - lo);
  // An undirected loop is listed twice in its own adjacency.
  if (!directed() && u == v) count /= 2;
  return count;
}

bool Graph::is_simple() const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].first == edges_[i].second) return false;
    if (i > 0 && edges_[i] == edges_[i - 1]) return false;
  }
  return true;
}

Graph build_graph(Vertex n, Orientation orientation, bool multigraph,
                  std::vector<Edge> edges) {
  return Graph(n, orientation, multigraph, std::move(edges));
}

Graph cycle_graph(Vertex n, Orientation orientation) {
  if (n < 3) throw ValidationError("cycle graph needs n >= 3");
  std::vector<Edge> edges;
  edges.reserve(n);
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, orientation, false, std::move(edges));
}

DegreeTable degrees(const Graph& g) {
  DegreeTable t;
  const Vertex n = g.num_vertices();
  t.out.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    t.out[v] = static_cast<std::uint32_t>(g.out_neighbors(v).size());
  }
  if (g.directed()) {
    t.in.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      t.in[v] = static_cast<std::uint32_t>(g.in_neighbors(v).size());
    }
  } else {
    t.in = t.out;
  }
  return t;
}

bool validate_cycle(const Graph& g, const VertexCycle& c) {
  const auto& vs = c.vertices;
  const std::size_t len = vs.size();
  if (len < 2) return false;
  if (len == 2 && !g.multigraph()) return false;
  std::unordered_set<Vertex> seen;
  for (Vertex v : vs) {
    if (v >= g.num_vertices() || !seen.insert(v).second) return false;
  }
  if (len == 2) {
    // Two parallel copies in an undirected multigraph, or both arcs.
    if (g.directed()) return g.has_edge(vs[0], vs[1]) && g.has_edge(vs[1], vs[0]);
    return g.multiplicity(vs[0], vs[1]) >= 2;
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (!g.has_edge(vs[i], vs[(i + 1) % len])) return false;
  }
  return true;
}

std::pair<Graph, SimplifyReport> simplify(const Graph& g) {
  SimplifyReport report;
  std::vector<Edge> kept;
  kept.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    if (e.first == e.second) {
      ++report.loops_removed;
    } else if (!kept.empty() && kept.back() == e) {
      ++report.parallel_surplus;
    } else {
      kept.push_back(e);
    }
  }
  return {Graph(g.num_vertices(), g.orientation(), false, std::move(kept)),
          report};
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << ' '
      << (g.directed() ? 'D' : 'U');
  if (g.multigraph()) out << " multi";
  out << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

Graph read_edge_list(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ValidationError("edge list: missing header");
  std::istringstream hs(header);
  long long n = -1;
  long long m = -1;
  std::string kind;
  std::string flag;
  if (!(hs >> n >> m >> kind) || n < 0 || m < 0) {
    throw ValidationError("edge list: malformed header '" + header + "'");
  }
  if (n > 0xFFFFFFFFLL) throw ValidationError("edge list: n exceeds 2^32-1");
  Orientation orientation;
  if (kind == "U") {
    orientation = Orientation::kUndirected;
  } else if (kind == "D") {
    orientation = Orientation::kDirected;
  } else {
    throw ValidationError("edge list: orientation must be U or D, got '" + kind + "'");
  }
  bool multi = false;
  if (hs >> flag) {
    if (flag != "multi") throw ValidationError("edge list: unknown flag '" + flag + "'");
    multi = true;
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1;
    long long v = -1;
    if (!(in >> u >> v)) {
      throw ValidationError("edge list: expected " + std::to_string(m) +
                            " edges, read " + std::to_string(i));
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ValidationError("edge list: endpoint out of range on edge " +
                            std::to_string(i));
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return Graph(static_cast<Vertex>(n), orientation, multi, std::move(edges));
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

}  // namespace cyclespan
