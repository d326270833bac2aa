#include "cyclespan/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cyclespan {

std::uint64_t SeededStream::geometric_gap(double p) {
  if (p >= 1.0) return 0;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  const double u = uniform();
  const double gap = std::floor(std::log1p(-u) / std::log1p(-p));
  if (!(gap < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(gap);
}

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0,1], got " +
                          std::to_string(p));
  }
}

// Calls visit(u, v) for each candidate pair of an n-vertex graph selected
// independently with probability p. Undirected candidates are u < v;
// directed candidates are all u != v. Pairs are visited in lexicographic
// order; geometric skipping keeps the cost at O(selected pairs + n).
template <class Visit>
void for_each_bernoulli_pair(Vertex n, double p, Orientation orientation,
                             SeededStream& s, Visit&& visit) {
  if (n < 2 || p <= 0.0) return;
  const std::uint64_t nn = n;
  const bool directed = orientation == Orientation::kDirected;
  const std::uint64_t total = directed ? nn * (nn - 1) : nn * (nn - 1) / 2;

  std::uint64_t row = 0;
  std::uint64_t row_start = 0;
  auto row_len = [&](std::uint64_t i) { return directed ? nn - 1 : nn - 1 - i; };

  std::uint64_t idx = 0;
  while (true) {
    const std::uint64_t gap = s.geometric_gap(p);
    if (gap >= total - idx) return;
    idx += gap;
    while (idx >= row_start + row_len(row)) {
      row_start += row_len(row);
      ++row;
    }
    const std::uint64_t r = idx - row_start;
    Vertex u = static_cast<Vertex>(row);
    Vertex v;
    if (directed) {
      v = static_cast<Vertex>(r < row ? r : r + 1);
    } else {
      v = static_cast<Vertex>(row + 1 + r);
    }
    visit(u, v);
    ++idx;
    if (idx >= total) return;
  }
}

bool is_cycle_pair(Vertex u, Vertex v, Vertex n, Orientation orientation) {
  if (orientation == Orientation::kDirected) return v == (u + 1) % n;
  return v == u + 1 || (u == 0 && v == n - 1);
}

std::vector<Edge> cycle_edges(Vertex n) {
  std::vector<Edge> edges;
  edges.reserve(n);
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return edges;
}

}  // namespace

Graph sample_configuration_model(Vertex n, std::uint32_t d, SeededStream& s) {
  if (d < 1) throw ValidationError("configuration model needs d >= 1");
  const std::uint64_t half_edges = std::uint64_t{n} * d;
  if (half_edges % 2 != 0) {
    throw ValidationError("configuration model needs n*d even, got n=" +
                          std::to_string(n) + " d=" + std::to_string(d));
  }
  std::vector<Vertex> points(half_edges);
  for (std::uint64_t h = 0; h < half_edges; ++h) points[h] = static_cast<Vertex>(h / d);
  std::shuffle(points.begin(), points.end(), s.engine());
  std::vector<Edge> edges;
  edges.reserve(half_edges / 2);
  for (std::uint64_t h = 0; h < half_edges; h += 2) {
    edges.emplace_back(points[h], points[h + 1]);
  }
  return Graph(n, Orientation::kUndirected, true, std::move(edges));
}

RegularSample sample_regular_simple(Vertex n, std::uint32_t d, SeededStream& s,
                                    std::size_t max_attempts) {
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    Graph g = sample_configuration_model(n, d, s);
    if (g.is_simple()) {
      auto [simple, report] = simplify(g);
      return {std::move(simple), attempt};
    }
  }
  throw SamplingError("no simple " + std::to_string(d) + "-regular graph on " +
                          std::to_string(n) + " vertices after " +
                          std::to_string(max_attempts) + " attempts",
                      max_attempts);
}

std::vector<Edge> sample_perfect_matching(Vertex n, SeededStream& s) {
  if (n % 2 != 0) throw ValidationError("perfect matching needs n even");
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::shuffle(order.begin(), order.end(), s.engine());
  std::vector<Edge> pairs;
  pairs.reserve(n / 2);
  for (Vertex i = 0; i < n; i += 2) {
    pairs.emplace_back(std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1]));
  }
  return pairs;
}

Graph sample_ham_plus_matching(Vertex n, SeededStream& s) {
  if (n < 4 || n % 2 != 0) {
    throw ValidationError("Hamilton cycle plus matching needs even n >= 4, got " +
                          std::to_string(n));
  }
  std::vector<Edge> edges = cycle_edges(n);
  auto matching = sample_perfect_matching(n, s);
  edges.insert(edges.end(), matching.begin(), matching.end());
  return Graph(n, Orientation::kUndirected, true, std::move(edges));
}

Graph sample_ham_plus_ham(Vertex n, SeededStream& s) {
  if (n < 3) throw ValidationError("Hamilton cycle union needs n >= 3");
  std::vector<Edge> edges = cycle_edges(n);
  // A uniform permutation with v0 fixed in front; both traversal directions
  // of an undirected cycle occur equally often, so the edge set is uniform.
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::shuffle(order.begin() + 1, order.end(), s.engine());
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(order[i], order[(i + 1) % n]);
  return Graph(n, Orientation::kUndirected, true, std::move(edges));
}

Graph sample_ham_plus_binomial(Vertex n, double p, Orientation orientation,
                               SeededStream& s) {
  if (n < 3) throw ValidationError("Hamilton cycle plus binomial needs n >= 3");
  check_probability(p, "p");
  std::vector<Edge> edges = cycle_edges(n);
  for_each_bernoulli_pair(n, p, orientation, s, [&](Vertex u, Vertex v) {
    if (!is_cycle_pair(u, v, n, orientation)) edges.emplace_back(u, v);
  });
  return Graph(n, orientation, false, std::move(edges));
}

Graph sample_binomial(Vertex n, double p, Orientation orientation, SeededStream& s) {
  check_probability(p, "p");
  std::vector<Edge> edges;
  for_each_bernoulli_pair(n, p, orientation, s,
                          [&](Vertex u, Vertex v) { edges.emplace_back(u, v); });
  return Graph(n, orientation, false, std::move(edges));
}

double sprinkle_probability(double p, double p_prime) {
  check_probability(p, "p");
  check_probability(p_prime, "p_prime");
  if (p < p_prime) {
    throw ValidationError("sprinkling needs p >= p', got p=" + std::to_string(p) +
                          " p'=" + std::to_string(p_prime));
  }
  if (p == p_prime) return 0.0;
  return (p - p_prime) / (1.0 - p_prime);
}

Graph sprinkle(const Graph& base, double p, double p_prime, SeededStream& s) {
  const double extra = sprinkle_probability(p, p_prime);
  if (!base.is_simple()) throw ValidationError("sprinkling needs a simple base graph");
  std::vector<Edge> edges(base.edges().begin(), base.edges().end());
  for_each_bernoulli_pair(base.num_vertices(), extra, base.orientation(), s,
                          [&](Vertex u, Vertex v) {
                            if (!base.has_edge(u, v)) edges.emplace_back(u, v);
                          });
  return Graph(base.num_vertices(), base.orientation(), false, std::move(edges));
}

CouplingOutcome couple_contract(const Graph& g, std::uint32_t ell, SeededStream& s) {
  const Vertex n = g.num_vertices();
  if (g.directed() || !g.is_simple()) {
    throw ValidationError("coupling needs a simple undirected cubic graph");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (g.neighbors(v).size() != 3) {
      throw ValidationError("coupling needs a cubic graph; vertex " +
                            std::to_string(v) + " has degree " +
                            std::to_string(g.neighbors(v).size()));
    }
  }
  if (std::uint64_t{2} * ell >= n) {
    throw ValidationError("coupling needs 2*ell < n, got ell=" + std::to_string(ell) +
                          " n=" + std::to_string(n));
  }

  // Half-edge h = 3v + slot sits on vertex v and points to neighbors(v)[slot].
  const std::uint64_t total = std::uint64_t{3} * n;
  std::vector<std::uint64_t> pool(total);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  // Partial Fisher-Yates: the first ell entries are a uniform ell-subset.
  for (std::uint32_t i = 0; i < ell; ++i) {
    const std::uint64_t j = i + s.below(total - i);
    std::swap(pool[i], pool[j]);
  }

  CouplingOutcome out;
  out.vertex_map.assign(n, CouplingOutcome::kDeleted);
  std::vector<char> deleted(n, 0);
  out.e1_holds = true;
  for (std::uint32_t i = 0; i < ell; ++i) {
    const Vertex u = static_cast<Vertex>(pool[i] / 3);
    const Vertex u_prime = g.neighbors(u)[pool[i] % 3];
    out.selected_edges.emplace_back(u, u_prime);
    for (Vertex w : {u, u_prime}) {
      if (deleted[w]) {
        out.e1_holds = false;
      } else {
        deleted[w] = 1;
      }
    }
  }

  const Vertex h_n = n - 2 * ell;
  if (!out.e1_holds) {
    out.contracted = Graph(h_n, Orientation::kUndirected, true, {});
    return out;
  }

  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!deleted[v]) out.vertex_map[v] = next++;
  }

  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) {
    if (!deleted[u] && !deleted[v]) edges.emplace_back(out.vertex_map[u], out.vertex_map[v]);
  }

  out.e2_holds = true;
  for (const auto& [u, u_prime] : out.selected_edges) {
    // The two other neighbours of each endpoint, excluding its partner.
    for (auto [w, partner] : {Edge{u, u_prime}, Edge{u_prime, u}}) {
      Vertex ends[2];
      int k = 0;
      for (Vertex x : g.neighbors(w)) {
        if (x != partner) ends[k++] = x;
      }
      if (deleted[ends[0]] || deleted[ends[1]]) {
        out.e2_holds = false;
        continue;
      }
      Edge added{out.vertex_map[ends[0]], out.vertex_map[ends[1]]};
      out.added_edges.push_back(added);
      edges.push_back(added);
    }
  }
  out.contracted = Graph(h_n, Orientation::kUndirected, true, std::move(edges));
  return out;
}

}  // namespace cyclespan
