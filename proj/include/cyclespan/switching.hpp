#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cyclespan/graph.hpp"
#include "cyclespan/rng.hpp"

namespace cyclespan {

/// Cycle length n, target length ell and orientation. Valid ranges:
/// undirected 4 <= ell <= floor(n/2) + 2, directed 4 <= ell <= n - 4.
struct SwitchingContext {
  Vertex n = 0;
  std::uint32_t ell = 0;
  Orientation orientation = Orientation::kUndirected;

  bool directed() const { return orientation == Orientation::kDirected; }
  bool valid() const;
  /// Throws ValidationError naming the violated range.
  void require_valid() const;
};

/// Forward distance from u to v along the cycle, (v - u) mod n.
inline Vertex cyclic_gap(Vertex u, Vertex v, Vertex n) { return (v + n - u) % n; }

/// Orders an undirected chord as (v_i, v_j) with (j - i mod n) <= n/2; when
/// both directions give n/2 the smaller first index wins.
Edge canonical_chord(Edge e, Vertex n);

/// Membership in the class of switchable chords E_ell. Undirected: the cyclic
/// gap g satisfies ceil(ell/2) <= g <= floor(n/2) - 1. Directed:
/// (j - i mod n) in [2, n - ell].
bool is_eligible_chord(Edge e, const SwitchingContext& ctx);

/// |E_ell| by enumeration.
std::uint64_t count_eligible_chords(const SwitchingContext& ctx);
/// (floor(n/2) - ceil(ell/2)) * n, or n * (n - ell - 1) when directed.
std::uint64_t eligible_chords_closed_form(const SwitchingContext& ctx);

/// E_ell in lexicographic order of the (canonical) ordered pair.
std::vector<Edge> eligible_chords(const SwitchingContext& ctx);

/// Partner set F_{e,ell}, indexed by the switching offset k:
///   undirected: {v_{i+k}, v_{j+ell-k-2}} for 1 <= k <= floor(ell/2) - 1,
///               using the canonical orientation of e, each pair canonical;
///   directed:   (v_{j+ell-k-2}, v_{i-k}) for 0 <= k <= ell - 2.
/// Throws ValidationError when e is not eligible.
std::vector<Edge> partner_chords(Edge e, const SwitchingContext& ctx);

/// Offset k of f within partner_chords(e), if f is a partner.
std::optional<std::uint32_t> partner_offset(Edge e, Edge f, const SwitchingContext& ctx);

/// The ell-cycle and the (n - ell + 4)-cycle of C_n + {e, f}.
std::pair<VertexCycle, VertexCycle> switch_cycles(const SwitchingContext& ctx, Edge e,
                                                  Edge f);

/// The directed ell-cycle (e, P1, f, P2) of the directed cycle plus {e, f}.
VertexCycle shortcut_cycle(const SwitchingContext& ctx, Edge e, Edge f);

/// Eligible chords other than e0 whose partner sets meet that of e0, found by
/// scanning E_ell. Sorted.
std::vector<Edge> conflicting_chords(Edge e0, const SwitchingContext& ctx);

/// Same set as conflicting_chords, generated from the O(ell) shift and
/// reflection candidates instead of a scan. Sorted.
std::vector<Edge> conflicting_chords_fast(Edge e0, const SwitchingContext& ctx);

/// Stated upper bounds on conflicting_chords().size(): 2*ell - 8
/// (undirected) and 2*ell - 6 (directed).
std::int64_t stated_conflict_bound(const SwitchingContext& ctx);

/// Union of the partner sets of the eligible members of a matching, on n
/// vertices. Throws ValidationError if `matching` shares a vertex.
Graph auxiliary_graph(const std::vector<Edge>& matching, const SwitchingContext& ctx);

enum class StagedVariant { kRegular, kBinomialUndirected, kBinomialDirected };

const char* to_string(StagedVariant v);

struct StagedOutcome {
  StagedVariant variant = StagedVariant::kRegular;
  std::uint32_t n = 0;
  std::uint32_t ell = 0;

  // Regular: stage sizes t1, t2. Binomial: step count t, exposure cap m, delta.
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
  std::uint64_t t = 0;
  std::uint64_t m = 0;
  double delta = 0.0;

  std::vector<Edge> accepted;  // M1 (regular) or A (binomial)
  std::vector<Edge> stage_two; // M2 (regular only)
  std::vector<Edge> matching;  // full revealed matching (regular only)

  std::uint64_t aux_edge_count = 0;            // |E(X_M1)| or |S'|
  std::uint64_t unmatched_aux_edge_count = 0;  // |E(Y_0)| (regular only)

  bool success = false;
  std::optional<std::pair<Edge, Edge>> witness;  // (e, f), f in F(e)
  bool aborted = false;

  std::uint64_t pairs_examined = 0;  // |R| (binomial) or stage II reveals
  std::uint64_t edges_found = 0;     // |A| (binomial) or |M1 ∩ E_ell|
  std::uint64_t second_round_hits = 0;  // |E(G'') ∩ S'| (binomial)
};

struct RegularStageSizes {
  std::uint64_t t1;
  std::uint64_t t2;
};

/// floor(n/16) and floor(n/500).
RegularStageSizes default_regular_stage_sizes(Vertex n);

/// Reveals a uniform perfect matching of 0..n-1 in three stages: t1 uniform
/// edges, then t2 reveals of the match of a maximum-degree vertex of the
/// auxiliary graph induced on unmatched vertices, then the rest.
StagedOutcome staged_exposure_regular(Vertex n, std::uint32_t ell, SeededStream& s);
StagedOutcome staged_exposure_regular(Vertex n, std::uint32_t ell,
                                      RegularStageSizes sizes, SeededStream& s);

struct BinomialStageParams {
  std::uint64_t t;
  std::uint64_t m;
};

/// Undirected: t = ceil(delta*n/15), m = floor(n^2/5).
/// Directed: t = ceil(delta*(n-ell-1)/4), m = floor(3n(n-ell-1)/4).
BinomialStageParams binomial_stage_params(Vertex n, std::uint32_t ell, double delta,
                                          Orientation orientation);

/// Two-round exposure of the binomial(delta/n) part of C_n + G(n,p) (or its
/// directed analogue): collects t eligible chords of G' ~ binomial(p/2) with
/// pairwise disjoint partner sets, then tests the union S' of those partner
/// sets against an independent binomial(p/(2-p)) round G''.
StagedOutcome staged_exposure_binomial(Vertex n, std::uint32_t ell, double delta,
                                       Orientation orientation, SeededStream& s);

}  // namespace cyclespan
