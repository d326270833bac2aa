#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclespan {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Raised when caller-supplied input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Orientation { kUndirected, kDirected };

const char* to_string(Orientation o);

/// Ordered vertex sequence describing a cycle. The closing edge
/// (back(), front()) is implicit.
struct VertexCycle {
  std::vector<Vertex> vertices;

  std::size_t length() const { return vertices.size(); }
  bool operator==(const VertexCycle&) const = default;
};

/// Immutable sparse graph on vertices 0..n-1.
///
/// Undirected edges are kept canonically (smaller endpoint first). The edge
/// multiset is sorted, so multiplicity and adjacency queries are binary
/// searches. Adjacency lists hold one entry per edge copy; an undirected loop
/// appears twice in its vertex's list, so it contributes 2 to the degree.
class Graph {
 public:
  Graph() = default;

  /// Throws ValidationError on out-of-range endpoints, or on loops and
  /// repeated edges when `multigraph` is false.
  Graph(Vertex n, Orientation orientation, bool multigraph,
        std::vector<Edge> edges);

  Vertex num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  Orientation orientation() const { return orientation_; }
  bool directed() const { return orientation_ == Orientation::kDirected; }
  bool multigraph() const { return multigraph_; }

  /// Sorted canonical edge multiset.
  std::span<const Edge> edges() const { return edges_; }

  /// Out-neighbours (directed) or neighbours (undirected), sorted, with
  /// repeats for parallel edges.
  std::span<const Vertex> out_neighbors(Vertex v) const {
    return {out_adj_.data() + out_off_[v], out_adj_.data() + out_off_[v + 1]};
  }
  std::span<const Vertex> in_neighbors(Vertex v) const;
  std::span<const Vertex> neighbors(Vertex v) const { return out_neighbors(v); }

  /// Number of copies of the edge (u, v); orientation-aware.
  std::size_t multiplicity(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const { return multiplicity(u, v) > 0; }

  /// True when there are no loops and no parallel edges.
  bool is_simple() const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && orientation_ == other.orientation_ &&
           multigraph_ == other.multigraph_ && edges_ == other.edges_;
  }

 private:
  Vertex n_ = 0;
  Orientation orientation_ = Orientation::kUndirected;
  bool multigraph_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_off_{0};
  std::vector<Vertex> out_adj_;
  std::vector<std::size_t> in_off_{0};
  std::vector<Vertex> in_adj_;
};

Graph build_graph(Vertex n, Orientation orientation, bool multigraph,
                  std::vector<Edge> edges);

/// The Hamilton cycle (v0, v1, ..., v_{n-1}, v0), or its directed version.
Graph cycle_graph(Vertex n, Orientation orientation = Orientation::kUndirected);

struct DegreeTable {
  // For undirected graphs `out` and `in` are equal.
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> in;
};

DegreeTable degrees(const Graph& g);

bool validate_cycle(const Graph& g, const VertexCycle& c);

struct SimplifyReport {
  std::size_t loops_removed = 0;
  std::size_t parallel_surplus = 0;
  bool operator==(const SimplifyReport&) const = default;
};

std::pair<Graph, SimplifyReport> simplify(const Graph& g);

// Edge-list text format:
//   n m U|D [multi]
//   u v      (m lines, 0-indexed, sorted canonical order on write)
void write_edge_list(std::ostream& out, const Graph& g);
std::string to_edge_list(const Graph& g);
Graph read_edge_list(std::istream& in);
Graph parse_edge_list(const std::string& text);

}  // namespace cyclespan
