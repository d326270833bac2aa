#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cyclespan/graph.hpp"
#include "cyclespan/rng.hpp"

namespace cyclespan {

/// Thrown by rejection samplers when the attempt budget runs out.
class SamplingError : public std::runtime_error {
 public:
  SamplingError(const std::string& what, std::size_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  std::size_t attempts() const { return attempts_; }

 private:
  std::size_t attempts_;
};

inline constexpr std::size_t kDefaultMaxAttempts = 1000;

/// d-regular multigraph from a uniform perfect matching of n*d half-edges.
Graph sample_configuration_model(Vertex n, std::uint32_t d, SeededStream& s);

struct RegularSample {
  Graph graph;
  std::size_t attempts = 0;
};

/// Uniform simple d-regular graph, by rejecting non-simple configurations.
RegularSample sample_regular_simple(Vertex n, std::uint32_t d, SeededStream& s,
                                    std::size_t max_attempts = kDefaultMaxAttempts);

/// Uniform perfect matching of 0..n-1, as n/2 pairs (n even).
std::vector<Edge> sample_perfect_matching(Vertex n, SeededStream& s);

/// The cycle C_n plus an independent uniform perfect matching (n even, n >= 4).
Graph sample_ham_plus_matching(Vertex n, SeededStream& s);

/// The cycle C_n plus an independent uniform Hamilton cycle (n >= 3).
Graph sample_ham_plus_ham(Vertex n, SeededStream& s);

/// C_n (or the directed cycle) plus every other pair independently with
/// probability p.
Graph sample_ham_plus_binomial(Vertex n, double p, Orientation orientation,
                               SeededStream& s);

/// G(n,p) or D(n,p).
Graph sample_binomial(Vertex n, double p, Orientation orientation, SeededStream& s);

/// Probability used to lift binomial(p') to binomial(p): (p - p')/(1 - p').
double sprinkle_probability(double p, double p_prime);

/// Adds every pair absent from `base` independently with probability
/// sprinkle_probability(p, p_prime).
Graph sprinkle(const Graph& base, double p, double p_prime, SeededStream& s);

struct CouplingOutcome {
  Graph contracted;               // H, on n - 2*ell vertices
  std::vector<Edge> added_edges;  // S_H, in H's labels, in insertion order
  bool e1_holds = false;          // the ell chosen edges are vertex-disjoint
  bool e2_holds = false;          // no reconnection half-edge sits on a deleted vertex
  // vertex_map[v] is the label in H of original vertex v, or kDeleted.
  std::vector<Vertex> vertex_map;
  std::vector<Edge> selected_edges;  // (u_i, u'_i) in G's labels

  static constexpr Vertex kDeleted = 0xFFFFFFFFu;
};

/// Contracts a simple cubic graph to one on n - 2*ell vertices: picks a
/// uniform ell-subset of half-edges, deletes both endpoints of each chosen
/// edge and reconnects the freed neighbours pairwise. When the chosen edges
/// overlap (e1_holds false), H is returned edgeless.
CouplingOutcome couple_contract(const Graph& g, std::uint32_t ell, SeededStream& s);

}  // namespace cyclespan
