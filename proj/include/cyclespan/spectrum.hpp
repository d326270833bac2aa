#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "cyclespan/graph.hpp"

namespace cyclespan {

inline constexpr std::uint64_t kDefaultSpectrumBudget = 10'000'000;
inline constexpr Vertex kExactCircumferenceLimit = 28;
inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

/// Cycle lengths of a graph, with exact counts up to `max_counted`.
struct CycleSpectrum {
  std::set<std::uint32_t> lengths_present;
  std::vector<std::uint64_t> counts;  // counts[k] for k <= max_counted
  std::uint32_t max_counted = 0;
  bool exhaustive = false;
  bool budget_exhausted = false;
  std::uint64_t cycles_enumerated = 0;

  bool contains(std::uint32_t k) const { return lengths_present.count(k) > 0; }
  /// True when every length in [lo, hi] is present.
  bool contains_range(std::uint32_t lo, std::uint32_t hi) const;
};

struct SpectrumOptions {
  std::uint64_t budget = kDefaultSpectrumBudget;
  /// Report length-2 cycles (parallel edges, antiparallel arcs).
  bool allow_length_two = false;
  /// Per-length counts are kept up to this length (0 disables counting).
  std::uint32_t max_counted = 0;
  /// Stop as soon as every length in [stop_lo, stop_hi] has been seen.
  /// Disabled when stop_lo > stop_hi.
  std::uint32_t stop_lo = 1;
  std::uint32_t stop_hi = 0;
};

enum class EnumerationStatus { kComplete, kBudgetExhausted, kStopped };

/// Enumerates every elementary cycle of length >= 3 exactly once (undirected
/// cycles once, not once per direction), calling visit with the vertex
/// sequence; returning false from visit stops the enumeration. Loops and
/// parallel edges are ignored. Budget counts reported cycles.
EnumerationStatus enumerate_cycles(
    const Graph& g, std::uint64_t budget,
    const std::function<bool(std::span<const Vertex>)>& visit,
    std::uint64_t* enumerated = nullptr);

/// Z_3..Z_K, as a vector indexed by length (entries below 3 are zero).
/// Undirected cycles are counted once per cycle subgraph, directed ones once
/// per directed cycle. In multigraphs each cycle is weighted by the product
/// of its edge multiplicities; loops never count.
std::vector<std::uint64_t> count_short_cycles(const Graph& g, std::uint32_t max_length);

CycleSpectrum cycle_length_set(const Graph& g, const SpectrumOptions& options = {});

enum class Presence { kPresent, kAbsent, kUnknown };

const char* to_string(Presence p);

struct LengthQuery {
  Presence verdict = Presence::kUnknown;
  std::optional<VertexCycle> witness;
};

LengthQuery has_cycle_of_length(const Graph& g, std::uint32_t ell,
                                std::uint64_t budget = kDefaultSpectrumBudget);

/// Depth-first search for one cycle of exactly `ell` vertices, extending
/// paths from each start vertex through larger vertices only, pruned by
/// reachability and distance back to the start. Budget counts search nodes;
/// kAbsent is returned only after the search space is exhausted.
LengthQuery find_cycle_of_length(const Graph& g, std::uint32_t ell,
                                 std::uint64_t node_budget = kDefaultSearchBudget);

struct Circumference {
  std::uint32_t length = 0;  // 0 when acyclic
  std::optional<VertexCycle> witness;
};

/// Exact longest cycle by bitmask dynamic programming over each component of
/// the cycle-bearing core. Throws ValidationError when a component exceeds
/// kExactCircumferenceLimit vertices.
Circumference circumference(const Graph& g);

}  // namespace cyclespan
