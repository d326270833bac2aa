#include "cyclespan/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace cyclespan {

namespace {

// Loop-free adjacency with parallel copies merged; `in` mirrors `out` for
// undirected graphs.
struct SimpleAdjacency {
  std::vector<std::vector<Vertex>> out;
  std::vector<std::vector<Vertex>> in;
  bool directed = false;
};

SimpleAdjacency simple_adjacency(const Graph& g) {
  const Vertex n = g.num_vertices();
  SimpleAdjacency a;
  a.directed = g.directed();
  a.out.resize(n);
  a.in.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.out_neighbors(v)) {
      if (w != v && (a.out[v].empty() || a.out[v].back() != w)) a.out[v].push_back(w);
    }
    for (Vertex w : g.in_neighbors(v)) {
      if (w != v && (a.in[v].empty() || a.in[v].back() != w)) a.in[v].push_back(w);
    }
  }
  return a;
}

// Vertices that can lie on a cycle: the 2-core (undirected), or what remains
// after repeatedly discarding vertices with no in- or out-arcs (directed).
std::vector<char> cycle_core(const SimpleAdjacency& a) {
  const std::size_t n = a.out.size();
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> out_deg(n), in_deg(n);
  std::vector<Vertex> queue;
  auto dead = [&](std::size_t v) {
    return a.directed ? (out_deg[v] == 0 || in_deg[v] == 0) : out_deg[v] <= 1;
  };
  for (std::size_t v = 0; v < n; ++v) {
    out_deg[v] = a.out[v].size();
    in_deg[v] = a.in[v].size();
    if (dead(v)) {
      alive[v] = 0;
      queue.push_back(static_cast<Vertex>(v));
    }
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    for (Vertex w : a.out[v]) {
      if (!alive[w]) continue;
      --in_deg[w];
      if (!a.directed) --out_deg[w];
      if (dead(w)) {
        alive[w] = 0;
        queue.push_back(w);
      }
    }
    if (a.directed) {
      for (Vertex w : a.in[v]) {
        if (!alive[w]) continue;
        --out_deg[w];
        if (dead(w)) {
          alive[w] = 0;
          queue.push_back(w);
        }
      }
    }
  }
  return alive;
}

// Marks the strongly connected component of `root` among vertices with
// allowed[v] set (connected component when undirected).
std::vector<char> component_of(const SimpleAdjacency& a, Vertex root,
                               const std::vector<char>& allowed) {
  const std::size_t n = a.out.size();
  auto reach = [&](const std::vector<std::vector<Vertex>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : adj[v]) {
        if (allowed[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return seen;
  };
  std::vector<char> fwd = reach(a.out);
  if (!a.directed) return fwd;
  const std::vector<char> bwd = reach(a.in);
  for (std::size_t v = 0; v < n; ++v) fwd[v] = fwd[v] && bwd[v];
  return fwd;
}

}  // namespace

bool CycleSpectrum::contains_range(std::uint32_t lo, std::uint32_t hi) const {
  for (std::uint32_t k = lo; k <= hi; ++k) {
    if (!contains(k)) return false;
  }
  return true;
}

const char* to_string(Presence p) {
  switch (p) {
    case Presence::kPresent:
      return "present";
    case Presence::kAbsent:
      return "absent";
    case Presence::kUnknown:
      return "unknown";
  }
  return "unknown";
}

EnumerationStatus enumerate_cycles(const Graph& g, std::uint64_t budget,
                                   const std::function<bool(std::span<const Vertex>)>& visit,
                                   std::uint64_t* enumerated) {
  const SimpleAdjacency a = simple_adjacency(g);
  const std::size_t n = a.out.size();
  std::vector<char> allowed = cycle_core(a);
  std::uint64_t reported = 0;
  auto finish = [&](EnumerationStatus st) {
    if (enumerated != nullptr) *enumerated = reported;
    return st;
  };

  std::vector<char> blocked(n, 0);
  std::vector<std::vector<Vertex>> blocked_by(n);
  std::vector<Vertex> path;
  struct Frame {
    Vertex v;
    std::size_t next;
    bool found;
  };
  std::vector<Frame> stack;
  std::vector<Vertex> unblock_stack;

  auto unblock = [&](Vertex u) {
    unblock_stack.assign(1, u);
    while (!unblock_stack.empty()) {
      const Vertex x = unblock_stack.back();
      unblock_stack.pop_back();
      if (!blocked[x]) continue;
      blocked[x] = 0;
      for (Vertex w : blocked_by[x]) unblock_stack.push_back(w);
      blocked_by[x].clear();
    }
  };

  // Johnson's circuit search, rooted at each vertex s over the component of s
  // among vertices >= s.
  for (std::size_t s_idx = 0; s_idx < n; ++s_idx) {
    const Vertex s = static_cast<Vertex>(s_idx);
    if (!allowed[s]) continue;
    const std::vector<char> comp = component_of(a, s, allowed);
    std::size_t comp_size = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v]) {
        ++comp_size;
        blocked[v] = 0;
        blocked_by[v].clear();
      }
    }
    if (comp_size >= 2) {
      blocked[s] = 1;
      path.assign(1, s);
      stack.assign(1, Frame{s, 0, false});
      while (!stack.empty()) {
        Frame& top = stack.back();
        const Vertex v = top.v;
        if (top.next < a.out[v].size()) {
          const Vertex w = a.out[v][top.next++];
          if (!comp[w]) continue;
          if (w == s) {
            top.found = true;
            const std::size_t len = path.size();
            const bool report = a.directed ? len >= 3 : (len >= 3 && path[1] < path.back());
            if (report) {
              if (reported == budget) return finish(EnumerationStatus::kBudgetExhausted);
              ++reported;
              if (!visit(path)) return finish(EnumerationStatus::kStopped);
            }
          } else if (!blocked[w]) {
            blocked[w] = 1;
            path.push_back(w);
            stack.push_back(Frame{w, 0, false});
          }
          continue;
        }
        const bool found = top.found;
        if (found) {
          unblock(v);
        } else {
          for (Vertex w : a.out[v]) {
            if (!comp[w]) continue;
            auto& lst = blocked_by[w];
            if (std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
          }
        }
        stack.pop_back();
        path.pop_back();
        if (!stack.empty()) stack.back().found = stack.back().found || found;
      }
    }
    allowed[s] = 0;
  }
  return finish(EnumerationStatus::kComplete);
}

std::vector<std::uint64_t> count_short_cycles(const Graph& g, std::uint32_t max_length) {
  if (max_length < 3) throw ValidationError("count_short_cycles needs K >= 3");
  const Vertex n = g.num_vertices();
  // Distinct neighbours with multiplicities.
  std::vector<std::vector<std::pair<Vertex, std::uint64_t>>> adj(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.out_neighbors(v)) {
      if (w == v) continue;
      auto& lst = adj[v];
      if (!lst.empty() && lst.back().first == w) {
        ++lst.back().second;
      } else {
        lst.emplace_back(w, 1);
      }
    }
  }

  std::vector<std::uint64_t> counts(max_length + 1, 0);
  std::vector<char> on_path(n, 0);
  Vertex start = 0;
  // Paths start at their minimum vertex; closing at depth >= 3 counts a cycle.
  auto dfs = [&](auto&& self, Vertex v, std::uint32_t depth, std::uint64_t weight) -> void {
    for (const auto& [w, mult] : adj[v]) {
      if (w == start) {
        if (depth >= 3) counts[depth] += weight * mult;
        continue;
      }
      if (w < start || on_path[w] || depth == max_length) continue;
      on_path[w] = 1;
      self(self, w, depth + 1, weight * mult);
      on_path[w] = 0;
    }
  };
  for (start = 0; start < n; ++start) {
    on_path[start] = 1;
    dfs(dfs, start, 1, 1);
    on_path[start] = 0;
  }
  if (!g.directed()) {
    for (auto& c : counts) c /= 2;
  }
  return counts;
}

CycleSpectrum cycle_length_set(const Graph& g, const SpectrumOptions& options) {
  CycleSpectrum spec;
  spec.max_counted = options.max_counted;
  spec.counts.assign(options.max_counted + 1, 0);

  const bool stopping = options.stop_lo <= options.stop_hi;
  std::uint32_t missing = 0;
  std::vector<char> seen_in_range;
  if (stopping) {
    seen_in_range.assign(options.stop_hi - options.stop_lo + 1, 0);
    missing = options.stop_hi - options.stop_lo + 1;
  }
  auto record = [&](std::uint32_t len, std::uint64_t times) {
    spec.lengths_present.insert(len);
    if (len <= options.max_counted) spec.counts[len] += times;
    if (stopping && len >= options.stop_lo && len <= options.stop_hi &&
        !seen_in_range[len - options.stop_lo]) {
      seen_in_range[len - options.stop_lo] = 1;
      --missing;
    }
  };

  if (options.allow_length_two) {
    // Directed: one per antiparallel pair (weighted by copies). Undirected:
    // C(m, 2) per edge of multiplicity m.
    std::uint64_t twos = 0;
    const auto es = g.edges();
    for (std::size_t i = 0; i < es.size();) {
      std::size_t j = i;
      while (j < es.size() && es[j] == es[i]) ++j;
      const std::uint64_t m = j - i;
      const auto [u, v] = es[i];
      if (u != v) {
        if (g.directed()) {
          if (u < v) twos += m * g.multiplicity(v, u);
        } else {
          twos += m * (m - 1) / 2;
        }
      }
      i = j;
    }
    if (twos > 0) record(2, twos);
  }
  if (stopping && missing == 0) return spec;

  const auto status = enumerate_cycles(
      g, options.budget,
      [&](std::span<const Vertex> cycle) {
        record(static_cast<std::uint32_t>(cycle.size()), 1);
        return !(stopping && missing == 0);
      },
      &spec.cycles_enumerated);
  spec.exhaustive = status == EnumerationStatus::kComplete;
  spec.budget_exhausted = status == EnumerationStatus::kBudgetExhausted;
  return spec;
}

LengthQuery find_cycle_of_length(const Graph& g, std::uint32_t ell, std::uint64_t node_budget) {
  LengthQuery q;
  const SimpleAdjacency a = simple_adjacency(g);
  const std::size_t n = a.out.size();
  if (ell < 3 || ell > n) {
    q.verdict = Presence::kAbsent;
    return q;
  }
  std::vector<char> allowed = cycle_core(a);
  std::vector<char> on_path(n, 0);
  std::vector<Vertex> path;
  std::vector<std::uint32_t> stamp(n, 0), dist(n, 0);
  std::uint32_t epoch = 0;
  std::vector<Vertex> queue;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  Vertex s = 0;

  std::vector<char> live(n, 0);
  std::vector<std::uint32_t> din(n, 0), dout(n, 0);
  std::vector<Vertex> cand, peel;
  auto has_arc = [&](Vertex x, Vertex y) {
    return std::binary_search(a.out[x].begin(), a.out[x].end(), y);
  };

  // Whether the path ending at w can still close after r more vertices.
  // Unused vertices that cannot be interior to the closing path w .. s are
  // peeled away; s must then be within r + 1 steps of w and r usable
  // vertices must be reachable.
  auto feasible = [&](Vertex w, std::uint32_t r) {
    if (r == 0) return has_arc(w, s);
    cand.clear();
    peel.clear();
    for (std::size_t x = s + 1; x < n; ++x) {
      if (allowed[x] && !on_path[x]) {
        live[x] = 1;
        cand.push_back(static_cast<Vertex>(x));
      }
    }
    auto dead = [&](Vertex x) { return a.directed ? din[x] == 0 || dout[x] == 0 : dout[x] < 2; };
    for (Vertex x : cand) {
      dout[x] = 0;
      for (Vertex y : a.out[x]) dout[x] += live[y] || y == s || (!a.directed && y == w);
      if (a.directed) {
        din[x] = 0;
        for (Vertex y : a.in[x]) din[x] += live[y] || y == w;
      }
    }
    for (Vertex x : cand) {
      if (dead(x)) {
        live[x] = 0;
        peel.push_back(x);
      }
    }
    while (!peel.empty()) {
      const Vertex x = peel.back();
      peel.pop_back();
      for (Vertex y : a.out[x]) {
        if (!live[y]) continue;
        if (a.directed) {
          --din[y];
        } else {
          --dout[y];
        }
        if (dead(y)) {
          live[y] = 0;
          peel.push_back(y);
        }
      }
      if (!a.directed) continue;
      for (Vertex y : a.in[x]) {
        if (!live[y]) continue;
        --dout[y];
        if (dead(y)) {
          live[y] = 0;
          peel.push_back(y);
        }
      }
    }

    ++epoch;
    queue.assign(1, w);
    stamp[w] = epoch;
    dist[w] = 0;
    std::uint32_t fresh = 0;
    std::uint32_t to_s = UINT32_MAX;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Vertex x = queue[h];
      for (Vertex y : a.out[x]) {
        if (y == s) {
          to_s = std::min(to_s, dist[x] + 1);
          continue;
        }
        if (!live[y] || stamp[y] == epoch) continue;
        stamp[y] = epoch;
        dist[y] = dist[x] + 1;
        ++fresh;
        queue.push_back(y);
      }
    }
    for (Vertex x : cand) live[x] = 0;
    return to_s <= r + 1 && fresh >= r;
  };

  // Next vertices with the fewest onward options first.
  std::vector<std::vector<std::pair<std::uint32_t, Vertex>>> order_at(n + 1);
  auto dfs = [&](auto&& self, Vertex v, std::uint32_t depth) -> bool {
    if (++nodes > node_budget) {
      exhausted = true;
      return false;
    }
    if (depth == ell) return has_arc(v, s);
    auto& order = order_at[depth];
    order.clear();
    for (Vertex w : a.out[v]) {
      if (w == s || !allowed[w] || on_path[w]) continue;
      std::uint32_t options = 0;
      for (Vertex y : a.out[w]) options += allowed[y] && !on_path[y];
      order.emplace_back(options, w);
    }
    std::sort(order.begin(), order.end());
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      const Vertex w = order_at[depth][idx].second;
      on_path[w] = 1;
      path.push_back(w);
      if (feasible(w, ell - depth - 1) && self(self, w, depth + 1)) return true;
      on_path[w] = 0;
      path.pop_back();
      if (exhausted) return false;
    }
    return false;
  };

  for (std::size_t root = 0; root < n && !exhausted; ++root) {
    if (!allowed[root]) continue;
    s = static_cast<Vertex>(root);
    const std::vector<char> comp = component_of(a, s, allowed);
    if (static_cast<std::size_t>(std::count(comp.begin(), comp.end(), 1)) >= ell) {
      on_path[s] = 1;
      path.assign(1, s);
      if (dfs(dfs, s, 1)) {
        q.verdict = Presence::kPresent;
        q.witness = VertexCycle{path};
        return q;
      }
      on_path[s] = 0;
    }
    allowed[s] = 0;
  }
  q.verdict = exhausted ? Presence::kUnknown : Presence::kAbsent;
  return q;
}

LengthQuery has_cycle_of_length(const Graph& g, std::uint32_t ell, std::uint64_t budget) {
  LengthQuery q;
  const auto status = enumerate_cycles(g, budget, [&](std::span<const Vertex> cycle) {
    if (cycle.size() != ell) return true;
    q.witness = VertexCycle{{cycle.begin(), cycle.end()}};
    return false;
  });
  if (q.witness) {
    q.verdict = Presence::kPresent;
  } else if (status == EnumerationStatus::kComplete) {
    q.verdict = Presence::kAbsent;
  } else {
    q.verdict = Presence::kUnknown;
  }
  return q;
}

Circumference circumference(const Graph& g) {
  const SimpleAdjacency a = simple_adjacency(g);
  const std::size_t n = a.out.size();
  std::vector<char> remaining = cycle_core(a);
  Circumference best;

  for (std::size_t root = 0; root < n; ++root) {
    if (!remaining[root]) continue;
    const std::vector<char> comp = component_of(a, static_cast<Vertex>(root), remaining);
    std::vector<Vertex> local;  // local index -> vertex
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v]) {
        local.push_back(static_cast<Vertex>(v));
        remaining[v] = 0;
      }
    }
    const std::size_t c = local.size();
    if (c < 3) continue;
    if (c > kExactCircumferenceLimit) {
      throw ValidationError("exact circumference limited to components of " +
                            std::to_string(kExactCircumferenceLimit) +
                            " vertices; found one with " + std::to_string(c));
    }
    std::vector<std::uint32_t> out_mask(c, 0);
    for (std::size_t i = 0; i < c; ++i) {
      for (Vertex w : a.out[local[i]]) {
        if (!comp[w]) continue;
        const auto j = static_cast<std::size_t>(
            std::lower_bound(local.begin(), local.end(), w) - local.begin());
        out_mask[i] |= std::uint32_t{1} << j;
      }
    }

    // Paths from s through vertices s+1..c-1; bit b of a mask stands for
    // local vertex s+1+b, and dp[mask] holds the possible endpoints.
    std::vector<std::uint32_t> dp;
    auto run = [&](std::size_t s) {
      const std::size_t r = c - 1 - s;
      dp.assign(std::size_t{1} << r, 0);
      const std::uint32_t higher = out_mask[s] >> (s + 1);
      for (std::size_t b = 0; b < r; ++b) {
        if (higher & (1u << b)) dp[std::size_t{1} << b] |= 1u << b;
      }
      for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        std::uint32_t ends = dp[mask];
        while (ends) {
          const int b = std::countr_zero(ends);
          ends &= ends - 1;
          const std::uint32_t next = (out_mask[s + 1 + b] >> (s + 1)) & ~static_cast<std::uint32_t>(mask) &
                                     static_cast<std::uint32_t>(dp.size() - 1);
          std::uint32_t nb = next;
          while (nb) {
            const int w = std::countr_zero(nb);
            nb &= nb - 1;
            dp[mask | (std::size_t{1} << w)] |= 1u << w;
          }
        }
      }
    };

    std::size_t best_s = 0, best_mask = 0;
    int best_end = -1;
    std::uint32_t comp_best = 0;
    for (std::size_t s = 0; s + 2 < c; ++s) {
      run(s);
      const std::size_t r = c - 1 - s;
      for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        const auto len = static_cast<std::uint32_t>(std::popcount(mask) + 1);
        if (len < 3 || len <= comp_best) continue;
        std::uint32_t ends = dp[mask];
        while (ends) {
          const int b = std::countr_zero(ends);
          ends &= ends - 1;
          if (out_mask[s + 1 + b] & (1u << s)) {
            comp_best = len;
            best_s = s;
            best_mask = mask;
            best_end = b;
            break;
          }
        }
      }
      (void)r;
    }
    if (comp_best <= best.length) continue;

    run(best_s);
    std::vector<Vertex> seq;
    std::size_t mask = best_mask;
    int cur = best_end;
    while (true) {
      seq.push_back(local[best_s + 1 + cur]);
      const std::size_t prev_mask = mask & ~(std::size_t{1} << cur);
      if (prev_mask == 0) break;
      std::uint32_t cands = dp[prev_mask];
      int chosen = -1;
      while (cands) {
        const int b = std::countr_zero(cands);
        cands &= cands - 1;
        if (out_mask[best_s + 1 + b] & (1u << (best_s + 1 + cur))) {
          chosen = b;
          break;
        }
      }
      mask = prev_mask;
      cur = chosen;
    }
    seq.push_back(local[best_s]);
    std::reverse(seq.begin(), seq.end());
    best.length = comp_best;
    best.witness = VertexCycle{std::move(seq)};
  }
  return best;
}

}  // namespace cyclespan
