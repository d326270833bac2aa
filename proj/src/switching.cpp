#include "cyclespan/switching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cyclespan {

namespace {

Vertex add_mod(Vertex a, std::int64_t delta, Vertex n) {
  std::int64_t r = (static_cast<std::int64_t>(a) + delta) % static_cast<std::int64_t>(n);
  if (r < 0) r += n;
  return static_cast<Vertex>(r);
}

// Gap range [lo, hi] of eligible chords, as (j - i mod n) of the ordered pair.
std::pair<std::int64_t, std::int64_t> eligible_gap_range(const SwitchingContext& ctx) {
  if (ctx.directed()) return {2, static_cast<std::int64_t>(ctx.n) - ctx.ell};
  return {(ctx.ell + 1) / 2, static_cast<std::int64_t>(ctx.n / 2) - 1};
}

// Visits E_ell in lexicographic order of (i, j). For each first index i the
// eligible second indices form at most two ascending runs: the gaps that
// wrap past v_{n-1}, then those that do not.
template <class Visit>
void for_each_eligible(const SwitchingContext& ctx, Visit&& visit) {
  const auto [lo, hi] = eligible_gap_range(ctx);
  if (lo > hi) return;
  const std::int64_t n = ctx.n;
  for (std::int64_t i = 0; i < n; ++i) {
    // Wrapped: g >= n - i, j = i + g - n.
    for (std::int64_t g = std::max(lo, n - i); g <= hi; ++g) {
      if (!visit(Edge{static_cast<Vertex>(i), static_cast<Vertex>(i + g - n)})) return;
    }
    for (std::int64_t g = lo; g <= std::min(hi, n - 1 - i); ++g) {
      if (!visit(Edge{static_cast<Vertex>(i), static_cast<Vertex>(i + g)})) return;
    }
  }
}

void require_eligible(Edge e, const SwitchingContext& ctx) {
  if (!is_eligible_chord(e, ctx)) {
    throw ValidationError("chord (" + std::to_string(e.first) + "," +
                          std::to_string(e.second) + ") is not in E_ell for n=" +
                          std::to_string(ctx.n) + " ell=" + std::to_string(ctx.ell));
  }
}

// Orientation of e used to define its partner set.
Edge oriented(Edge e, const SwitchingContext& ctx) {
  return ctx.directed() ? e : canonical_chord(e, ctx.n);
}

}  // namespace

bool SwitchingContext::valid() const {
  if (ell < 4) return false;
  if (directed()) return ell + 4 <= n;
  return ell <= n / 2 + 2;
}

void SwitchingContext::require_valid() const {
  if (valid()) return;
  if (directed()) {
    throw ValidationError("directed switching needs 4 <= ell <= n-4, got n=" +
                          std::to_string(n) + " ell=" + std::to_string(ell));
  }
  throw ValidationError("undirected switching needs 4 <= ell <= n/2+2, got n=" +
                        std::to_string(n) + " ell=" + std::to_string(ell));
}

Edge canonical_chord(Edge e, Vertex n) {
  auto [a, b] = e;
  const Vertex forward = cyclic_gap(a, b, n);
  const Vertex backward = cyclic_gap(b, a, n);
  if (forward < backward) return {a, b};
  if (backward < forward) return {b, a};
  return {std::min(a, b), std::max(a, b)};
}

bool is_eligible_chord(Edge e, const SwitchingContext& ctx) {
  const Vertex n = ctx.n;
  if (e.first >= n || e.second >= n || e.first == e.second) return false;
  const auto [lo, hi] = eligible_gap_range(ctx);
  const Edge o = oriented(e, ctx);
  const std::int64_t gap = cyclic_gap(o.first, o.second, n);
  return gap >= lo && gap <= hi;
}

std::uint64_t count_eligible_chords(const SwitchingContext& ctx) {
  ctx.require_valid();
  std::uint64_t count = 0;
  for_each_eligible(ctx, [&](Edge) {
    ++count;
    return true;
  });
  return count;
}

std::uint64_t eligible_chords_closed_form(const SwitchingContext& ctx) {
  ctx.require_valid();
  const std::uint64_t n = ctx.n;
  if (ctx.directed()) return n * (n - ctx.ell - 1);
  return (n / 2 - (ctx.ell + 1) / 2) * n;
}

std::vector<Edge> eligible_chords(const SwitchingContext& ctx) {
  ctx.require_valid();
  std::vector<Edge> out;
  for_each_eligible(ctx, [&](Edge e) {
    out.push_back(e);
    return true;
  });
  return out;
}

std::vector<Edge> partner_chords(Edge e, const SwitchingContext& ctx) {
  ctx.require_valid();
  require_eligible(e, ctx);
  const Vertex n = ctx.n;
  const std::int64_t ell = ctx.ell;
  const auto [i, j] = oriented(e, ctx);
  std::vector<Edge> out;
  if (ctx.directed()) {
    out.reserve(ell - 1);
    for (std::int64_t k = 0; k <= ell - 2; ++k) {
      out.emplace_back(add_mod(j, ell - k - 2, n), add_mod(i, -k, n));
    }
  } else {
    out.reserve(ell / 2 - 1);
    for (std::int64_t k = 1; k <= ell / 2 - 1; ++k) {
      out.push_back(canonical_chord({add_mod(i, k, n), add_mod(j, ell - k - 2, n)}, n));
    }
  }
  return out;
}

std::optional<std::uint32_t> partner_offset(Edge e, Edge f, const SwitchingContext& ctx) {
  if (!is_eligible_chord(e, ctx)) return std::nullopt;
  const auto partners = partner_chords(e, ctx);
  const Edge target = ctx.directed() ? f : canonical_chord(f, ctx.n);
  for (std::size_t idx = 0; idx < partners.size(); ++idx) {
    if (partners[idx] == target) {
      return static_cast<std::uint32_t>(ctx.directed() ? idx : idx + 1);
    }
  }
  return std::nullopt;
}

std::pair<VertexCycle, VertexCycle> switch_cycles(const SwitchingContext& ctx, Edge e,
                                                  Edge f) {
  if (ctx.directed()) throw ValidationError("switch_cycles needs an undirected context");
  ctx.require_valid();
  require_eligible(e, ctx);
  const auto k = partner_offset(e, f, ctx);
  if (!k) throw ValidationError("f is not in the partner set of e");
  const Vertex n = ctx.n;
  const auto [i, j] = canonical_chord(e, n);
  const Vertex a = add_mod(i, *k, n);                        // v_{i+k}
  const Vertex b = add_mod(j, static_cast<std::int64_t>(ctx.ell) - *k - 2, n);

  // P1 = (v_i .. v_{i+k}), f, P2 = (v_b down to v_j), e.
  VertexCycle short_cycle;
  for (Vertex v = i;; v = add_mod(v, 1, n)) {
    short_cycle.vertices.push_back(v);
    if (v == a) break;
  }
  for (Vertex v = b;; v = add_mod(v, -1, n)) {
    short_cycle.vertices.push_back(v);
    if (v == j) break;
  }

  // P3 = (v_b up to v_i), e, P4 = (v_j down to v_{i+k}), f.
  VertexCycle long_cycle;
  for (Vertex v = b;; v = add_mod(v, 1, n)) {
    long_cycle.vertices.push_back(v);
    if (v == i) break;
  }
  for (Vertex v = j;; v = add_mod(v, -1, n)) {
    long_cycle.vertices.push_back(v);
    if (v == a) break;
  }
  return {std::move(short_cycle), std::move(long_cycle)};
}

VertexCycle shortcut_cycle(const SwitchingContext& ctx, Edge e, Edge f) {
  if (!ctx.directed()) throw ValidationError("shortcut_cycle needs a directed context");
  ctx.require_valid();
  require_eligible(e, ctx);
  const auto k = partner_offset(e, f, ctx);
  if (!k) throw ValidationError("f is not in the partner set of e");
  const Vertex n = ctx.n;
  const auto [i, j] = e;
  const Vertex tail = add_mod(j, static_cast<std::int64_t>(ctx.ell) - *k - 2, n);

  // e, P1 = (v_j .. v_{j+ell-k-2}), f, P2 = (v_{i-k} .. v_{i-1}).
  VertexCycle c;
  c.vertices.push_back(i);
  for (Vertex v = j;; v = add_mod(v, 1, n)) {
    c.vertices.push_back(v);
    if (v == tail) break;
  }
  for (Vertex v = add_mod(i, -static_cast<std::int64_t>(*k), n); v != i; v = add_mod(v, 1, n)) {
    c.vertices.push_back(v);
  }
  return c;
}

std::vector<Edge> conflicting_chords(Edge e0, const SwitchingContext& ctx) {
  ctx.require_valid();
  auto target = partner_chords(e0, ctx);
  std::sort(target.begin(), target.end());
  const Edge self = oriented(e0, ctx);
  std::vector<Edge> out;
  for_each_eligible(ctx, [&](Edge e) {
    if (e == self) return true;
    for (const Edge& f : partner_chords(e, ctx)) {
      if (std::binary_search(target.begin(), target.end(), f)) {
        out.push_back(e);
        break;
      }
    }
    return true;
  });
  return out;
}

std::vector<Edge> conflicting_chords_fast(Edge e0, const SwitchingContext& ctx) {
  ctx.require_valid();
  require_eligible(e0, ctx);
  const Vertex n = ctx.n;
  const std::int64_t ell = ctx.ell;
  const auto [i, j] = oriented(e0, ctx);
  std::vector<Edge> out;
  auto consider = [&](Vertex x, Vertex y) {
    const Edge cand{x, y};
    if (cand == Edge{i, j} || x == y) return;
    // The candidate's partner set is only the assumed one in its own
    // defining orientation.
    if (!ctx.directed() && canonical_chord(cand, n) != cand) return;
    if (is_eligible_chord(cand, ctx)) out.push_back(cand);
  };
  if (ctx.directed()) {
    // Shared arc at offsets k, k' forces e = e0 shifted by d = k' - k.
    for (std::int64_t d = -(ell - 2); d <= ell - 2; ++d) {
      if (d != 0) consider(add_mod(i, d, n), add_mod(j, d, n));
    }
  } else {
    const std::int64_t big_k = ell / 2 - 1;
    // Aligned match: (i + d, j - d) with |d| <= K - 1.
    for (std::int64_t d = -(big_k - 1); d <= big_k - 1; ++d) {
      if (d != 0) consider(add_mod(i, d, n), add_mod(j, -d, n));
    }
    // Crossed match: k + k' = s with 2 <= s <= 2K.
    for (std::int64_t s = 2; s <= 2 * big_k; ++s) {
      consider(add_mod(j, ell - 2 - s, n), add_mod(i, s - ell + 2, n));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t stated_conflict_bound(const SwitchingContext& ctx) {
  const std::int64_t ell = ctx.ell;
  return ctx.directed() ? 2 * ell - 6 : 2 * ell - 8;
}

Graph auxiliary_graph(const std::vector<Edge>& matching, const SwitchingContext& ctx) {
  ctx.require_valid();
  std::vector<char> used(ctx.n, 0);
  std::vector<Edge> edges;
  for (const Edge& e : matching) {
    for (Vertex v : {e.first, e.second}) {
      if (v >= ctx.n) throw ValidationError("matching edge endpoint out of range");
      if (used[v]) {
        throw ValidationError("not a matching: vertex " + std::to_string(v) +
                              " is covered twice");
      }
      used[v] = 1;
    }
    if (!is_eligible_chord(e, ctx)) continue;
    for (const Edge& f : partner_chords(e, ctx)) edges.push_back(f);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(ctx.n, ctx.orientation, false, std::move(edges));
}

const char* to_string(StagedVariant v) {
  switch (v) {
    case StagedVariant::kRegular:
      return "regular";
    case StagedVariant::kBinomialUndirected:
      return "binomial-undirected";
    case StagedVariant::kBinomialDirected:
      return "binomial-directed";
  }
  return "unknown";
}

RegularStageSizes default_regular_stage_sizes(Vertex n) { return {n / 16, n / 500}; }

StagedOutcome staged_exposure_regular(Vertex n, std::uint32_t ell, SeededStream& s) {
  return staged_exposure_regular(n, ell, default_regular_stage_sizes(n), s);
}

namespace {

// Pool of unmatched vertices with O(1) uniform draw and removal.
class VertexPool {
 public:
  explicit VertexPool(Vertex n) : items_(n), pos_(n) {
    for (Vertex v = 0; v < n; ++v) items_[v] = pos_[v] = v;
  }
  std::size_t size() const { return items_.size(); }
  bool contains(Vertex v) const { return pos_[v] != kGone; }
  void remove(Vertex v) {
    const Vertex p = pos_[v];
    const Vertex last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[v] = kGone;
  }
  Vertex draw(SeededStream& s) {
    const Vertex v = items_[s.below(items_.size())];
    remove(v);
    return v;
  }
  std::vector<Vertex>& items() { return items_; }

 private:
  static constexpr Vertex kGone = 0xFFFFFFFFu;
  std::vector<Vertex> items_;
  std::vector<Vertex> pos_;
};

Edge sorted_pair(Vertex a, Vertex b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

StagedOutcome staged_exposure_regular(Vertex n, std::uint32_t ell, RegularStageSizes sizes,
                                      SeededStream& s) {
  if (n % 2 != 0) throw ValidationError("staged regular exposure needs n even");
  const SwitchingContext ctx{n, ell, Orientation::kUndirected};
  ctx.require_valid();
  if (2 * (sizes.t1 + sizes.t2) > n) {
    throw ValidationError("stage sizes exceed the matching size n/2");
  }

  StagedOutcome out;
  out.variant = StagedVariant::kRegular;
  out.n = n;
  out.ell = ell;
  out.t1 = sizes.t1;
  out.t2 = sizes.t2;

  VertexPool pool(n);

  // Stage I: t1 uniform edges of the matching.
  for (std::uint64_t t = 0; t < sizes.t1; ++t) {
    const Vertex u = pool.draw(s);
    const Vertex v = pool.draw(s);
    out.accepted.push_back(sorted_pair(u, v));
  }

  // Auxiliary graph X_{M1}, remembering one generating chord per edge.
  std::vector<std::pair<Edge, Edge>> owned;  // (f, e)
  for (const Edge& e : out.accepted) {
    if (!is_eligible_chord(e, ctx)) continue;
    ++out.edges_found;
    const Edge ce = canonical_chord(e, n);
    for (const Edge& f : partner_chords(ce, ctx)) owned.emplace_back(f, ce);
  }
  std::sort(owned.begin(), owned.end());
  owned.erase(std::unique(owned.begin(), owned.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              owned.end());
  out.aux_edge_count = owned.size();

  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& [f, e] : owned) {
    adj[f.first].push_back(f.second);
    adj[f.second].push_back(f.first);
  }
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [f, e] : owned) {
    if (pool.contains(f.first) && pool.contains(f.second)) {
      ++out.unmatched_aux_edge_count;
      ++deg[f.first];
      ++deg[f.second];
    }
  }

  auto find_owner = [&](Edge f) -> const Edge* {
    const Edge cf = canonical_chord(f, n);
    auto it = std::lower_bound(owned.begin(), owned.end(), cf,
                               [](const auto& item, const Edge& key) { return item.first < key; });
    if (it != owned.end() && it->first == cf) return &it->second;
    return nullptr;
  };

  // Stage II: reveal the match of a maximum-degree unmatched vertex.
  for (std::uint64_t t = 0; t < sizes.t2; ++t) {
    Vertex u = n;
    for (Vertex v = 0; v < n; ++v) {
      if (pool.contains(v) && (u == n || deg[v] > deg[u])) u = v;
    }
    pool.remove(u);
    const Vertex v = pool.draw(s);
    const Edge f = sorted_pair(u, v);
    out.stage_two.push_back(f);
    ++out.pairs_examined;
    if (const Edge* owner = find_owner(f); owner != nullptr && !out.success) {
      out.success = true;
      out.witness = std::make_pair(*owner, canonical_chord(f, n));
    }
    for (Vertex w : {u, v}) {
      for (Vertex x : adj[w]) {
        if (pool.contains(x)) --deg[x];
      }
    }
  }

  // Stage III: the remaining edges, uniformly.
  auto& rest = pool.items();
  std::shuffle(rest.begin(), rest.end(), s.engine());
  out.matching = out.accepted;
  out.matching.insert(out.matching.end(), out.stage_two.begin(), out.stage_two.end());
  for (std::size_t idx = 0; idx + 1 < rest.size(); idx += 2) {
    out.matching.push_back(sorted_pair(rest[idx], rest[idx + 1]));
  }
  std::sort(out.matching.begin(), out.matching.end());
  return out;
}

BinomialStageParams binomial_stage_params(Vertex n, std::uint32_t ell, double delta,
                                          Orientation orientation) {
  const double nn = n;
  if (orientation == Orientation::kDirected) {
    const double span = nn - ell - 1;
    return {static_cast<std::uint64_t>(std::ceil(delta * span / 4.0)),
            static_cast<std::uint64_t>(std::floor(3.0 * nn * span / 4.0))};
  }
  return {static_cast<std::uint64_t>(std::ceil(delta * nn / 15.0)),
          static_cast<std::uint64_t>(std::uint64_t{n} * n / 5)};
}

StagedOutcome staged_exposure_binomial(Vertex n, std::uint32_t ell, double delta,
                                       Orientation orientation, SeededStream& s) {
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) {
    throw ValidationError("staged binomial exposure needs 0 < delta < 1/3, got " +
                          std::to_string(delta));
  }
  const SwitchingContext ctx{n, ell, orientation};
  ctx.require_valid();

  StagedOutcome out;
  out.variant = ctx.directed() ? StagedVariant::kBinomialDirected
                               : StagedVariant::kBinomialUndirected;
  out.n = n;
  out.ell = ell;
  out.delta = delta;
  const auto params = binomial_stage_params(n, ell, delta, orientation);
  out.t = params.t;
  out.m = params.m;

  const double p = delta / n;
  const double p_first = p / 2.0;
  const double p_second = p / (2.0 - p);

  // Blocked chords B, as a bitset over i*n + j.
  std::vector<std::uint64_t> blocked((std::uint64_t{n} * n + 63) / 64, 0);
  auto bit = [n](Edge e) { return std::uint64_t{e.first} * n + e.second; };
  auto is_blocked = [&](Edge e) { return (blocked[bit(e) >> 6] >> (bit(e) & 63)) & 1u; };
  auto block = [&](Edge e) { blocked[bit(e) >> 6] |= std::uint64_t{1} << (bit(e) & 63); };

  std::uint64_t gap = s.geometric_gap(p_first);
  bool done = out.t == 0;
  if (!done) {
    for_each_eligible(ctx, [&](Edge e) {
      if (is_blocked(e)) return true;
      ++out.pairs_examined;
      if (gap == 0) {
        out.accepted.push_back(e);
        for (const Edge& c : conflicting_chords_fast(e, ctx)) block(c);
        if (out.accepted.size() >= out.t) {
          done = true;
          return false;
        }
        gap = s.geometric_gap(p_first);
        return true;
      }
      --gap;
      if (out.pairs_examined > out.m) {
        out.aborted = true;
        return false;
      }
      return true;
    });
  }
  out.edges_found = out.accepted.size();
  // Running out of eligible chords before t acceptances also fails.
  if (!done) out.aborted = true;
  if (out.aborted) return out;

  std::vector<std::pair<Edge, Edge>> pool;  // (e, f)
  for (const Edge& e : out.accepted) {
    for (const Edge& f : partner_chords(e, ctx)) pool.emplace_back(e, f);
  }
  out.aux_edge_count = pool.size();

  std::uint64_t idx = 0;
  while (true) {
    const std::uint64_t skip = s.geometric_gap(p_second);
    if (skip >= pool.size() - idx) break;
    idx += skip;
    ++out.second_round_hits;
    if (!out.success) {
      out.success = true;
      out.witness = pool[idx];
    }
    if (++idx >= pool.size()) break;
  }
  return out;
}

}  // namespace cyclespan
