#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "cyclespan/experiment.hpp"
#include "cyclespan/oracle.hpp"
#include "cyclespan/samplers.hpp"
#include "cyclespan/spectrum.hpp"
#include "cyclespan/switching.hpp"
#include "cyclespan/theory.hpp"

namespace cyclespan {

bool SuiteReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SuiteCheck& c) { return c.violations == 0; });
}

std::string format_report(const SuiteReport& r) {
  std::string out = "suite " + r.suite + ": " + (r.ok() ? "ok" : "FAILED") + "\n";
  for (const SuiteCheck& c : r.checks) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-28s checked=%-10llu violations=%llu\n",
                  c.name.c_str(), static_cast<unsigned long long>(c.checked),
                  static_cast<unsigned long long>(c.violations));
    out += line;
    if (c.violations > 0) out += "    first: " + c.first_violation + "\n";
  }
  return out;
}

namespace {

std::string edge_text(Edge e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

struct Tally {
  explicit Tally(std::string name) { check.name = std::move(name); }
  SuiteCheck check;
  void record(bool ok, const std::string& what) {
    ++check.checked;
    if (ok) return;
    if (check.violations++ == 0) check.first_violation = what;
  }
};

}  // namespace

SuiteReport verify_switching_range(Vertex n_max, bool undirected, bool directed,
                                   std::uint32_t ell_lo, std::uint32_t ell_hi) {
  Tally eligible_count{"eligible_count"};
  Tally partner_count{"partner_count"};
  Tally cycle_lengths{"cycle_lengths"};
  Tally conflicts_fast{"conflicts_fast_agrees"};
  Tally bound_u{"conflict_bound_undirected"};
  Tally bound_d{"conflict_bound_directed"};

  for (Vertex n = 4; n <= n_max; ++n) {
    for (bool dir : {false, true}) {
      if ((dir && !directed) || (!dir && !undirected)) continue;
      const Orientation o = dir ? Orientation::kDirected : Orientation::kUndirected;
      const Graph base = cycle_graph(n, o);
      for (std::uint32_t ell = std::max<std::uint32_t>(4, ell_lo); ell <= std::min(n, ell_hi);
           ++ell) {
        const SwitchingContext ctx{n, ell, o};
        if (!ctx.valid()) continue;
        const std::string where = std::string(dir ? "directed" : "undirected") +
                                  " n=" + std::to_string(n) + " ell=" + std::to_string(ell);

        const auto chords = eligible_chords(ctx);
        const auto enumerated = count_eligible_chords(ctx);
        const auto closed = eligible_chords_closed_form(ctx);
        eligible_count.record(enumerated == closed && chords.size() == closed,
                              where + ": |E| enumerated " + std::to_string(enumerated) +
                                  " vs closed form " + std::to_string(closed));

        const std::size_t want = dir ? ell - 1 : ell / 2 - 1;
        std::map<Edge, std::vector<Edge>> owners;
        for (const Edge& e : chords) {
          const auto partners = partner_chords(e, ctx);
          partner_count.record(partners.size() == want,
                               where + " e=" + edge_text(e) + ": |F|=" +
                                   std::to_string(partners.size()));
          for (const Edge& f : partners) {
            owners[f].push_back(e);
            std::vector<Edge> edges(base.edges().begin(), base.edges().end());
            edges.push_back(e);
            edges.push_back(f);
            bool ok = true;
            std::string detail;
            try {
              const Graph g(n, o, false, std::move(edges));
              if (dir) {
                const auto c = shortcut_cycle(ctx, e, f);
                ok = c.length() == ell && validate_cycle(g, c);
              } else {
                const auto [c1, c2] = switch_cycles(ctx, e, f);
                ok = c1.length() == ell && c2.length() == n - ell + 4 && validate_cycle(g, c1) &&
                     validate_cycle(g, c2);
              }
            } catch (const ValidationError& err) {
              ok = false;
              detail = std::string(" (") + err.what() + ")";
            }
            cycle_lengths.record(ok, where + " e=" + edge_text(e) + " f=" + edge_text(f) + detail);
          }
        }

        const std::int64_t bound = stated_conflict_bound(ctx);
        for (const Edge& e0 : chords) {
          std::vector<Edge> scan;
          for (const Edge& f : partner_chords(e0, ctx)) {
            for (const Edge& e : owners[f]) {
              if (e != e0) scan.push_back(e);
            }
          }
          std::sort(scan.begin(), scan.end());
          scan.erase(std::unique(scan.begin(), scan.end()), scan.end());
          const auto fast = conflicting_chords_fast(e0, ctx);
          conflicts_fast.record(fast == scan, where + " e0=" + edge_text(e0));
          (dir ? bound_d : bound_u)
              .record(static_cast<std::int64_t>(scan.size()) <= bound,
                      where + " e0=" + edge_text(e0) + ": " + std::to_string(scan.size()) +
                          " conflicting chords > " + std::to_string(bound));
        }
      }
    }
  }
  SuiteReport rep{"switching", {}};
  for (Tally* t : {&eligible_count, &partner_count, &cycle_lengths, &conflicts_fast}) {
    rep.checks.push_back(t->check);
  }
  if (undirected) rep.checks.push_back(bound_u.check);
  if (directed) rep.checks.push_back(bound_d.check);
  return rep;
}

SuiteReport verify_switching(Vertex n_max, bool undirected, bool directed) {
  return verify_switching_range(n_max, undirected, directed, 4, UINT32_MAX);
}

SuiteReport verify_poisson(std::uint64_t master_seed) {
  constexpr Vertex kN = 1000;
  constexpr std::uint64_t kSamples = 400;
  double sum3 = 0, sum4 = 0;
  for (std::uint64_t i = 0; i < kSamples; ++i) {
    SeededStream s(master_seed, i);
    const auto counts = count_short_cycles(sample_configuration_model(kN, 3, s), 4);
    sum3 += double(counts[3]);
    sum4 += double(counts[4]);
  }
  SuiteReport rep{"poisson", {}};
  for (auto [k, sum] : {std::pair<std::uint32_t, double>{3, sum3}, {4, sum4}}) {
    const double lam = lambda_k(k, 2.0, false);
    const double mean = sum / kSamples;
    const double tol = 3.0 * std::sqrt(lam / kSamples);
    Tally t{"mean_Z" + std::to_string(k)};
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean %.4f vs %.4f +- %.4f", mean, lam, tol);
    t.record(std::fabs(mean - lam) <= tol, buf);
    rep.checks.push_back(t.check);
  }
  return rep;
}

SuiteReport verify_lemma(std::uint64_t master_seed) {
  constexpr Vertex kN = 2000;
  constexpr std::uint64_t kTrials = 50;
  SuiteReport rep{"lemma", {}};
  for (std::uint32_t ell : {16u, 64u}) {
    Tally aux{"aux_edges_ell" + std::to_string(ell)};
    Tally unmatched{"unmatched_aux_edges_ell" + std::to_string(ell)};
    const double nl = double(kN) * ell;
    for (std::uint64_t i = 0; i < kTrials; ++i) {
      SeededStream s(master_seed, i);
      const auto o = staged_exposure_regular(kN, ell, s);
      aux.record(double(o.aux_edge_count) >= nl / 128.0,
                 "trial " + std::to_string(i) + ": " + std::to_string(o.aux_edge_count) +
                     " auxiliary edges");
      unmatched.record(double(o.unmatched_aux_edge_count) >= nl / 200.0,
                       "trial " + std::to_string(i) + ": " +
                           std::to_string(o.unmatched_aux_edge_count) + " unmatched edges");
    }
    rep.checks.push_back(aux.check);
    rep.checks.push_back(unmatched.check);
  }
  return rep;
}

SuiteReport verify_spectrum_oracle(std::uint64_t graphs, std::uint64_t master_seed) {
  Tally counts{"count_short_cycles"};
  Tally lengths{"cycle_length_set"};
  Tally circ{"circumference"};
  Tally query{"has_cycle_of_length"};
  Tally search{"find_cycle_of_length"};
  for (std::uint64_t i = 0; i < graphs; ++i) {
    SeededStream s(master_seed, i);
    const Vertex n = 3 + static_cast<Vertex>(s.below(8));
    const double p = 0.2 + 0.5 * s.uniform();
    const Orientation o = i % 2 ? Orientation::kDirected : Orientation::kUndirected;
    const Graph g = sample_binomial(n, p, o, s);
    const std::string where = "graph " + std::to_string(i) + " (" + to_edge_list(g) + ")";

    const auto truth = brute_force_cycle_counts(g);
    const auto fast = count_short_cycles(g, n);
    bool same = true;
    for (Vertex k = 3; k <= n; ++k) same = same && truth[k] == fast[k];
    counts.record(same, where);

    const auto spec = cycle_length_set(g);
    std::uint32_t longest = 0;
    bool set_ok = spec.exhaustive;
    for (Vertex k = 3; k <= n; ++k) {
      set_ok = set_ok && (truth[k] > 0) == spec.contains(k);
      if (truth[k] > 0) longest = k;
    }
    set_ok = set_ok && (spec.lengths_present.empty() || *spec.lengths_present.begin() >= 3);
    lengths.record(set_ok, where);

    const auto c = circumference(g);
    circ.record(c.length == longest && (longest == 0 || (c.witness && validate_cycle(g, *c.witness) &&
                                                         c.witness->length() == longest)),
                where);

    for (Vertex k = 3; k <= n; ++k) {
      const auto q = has_cycle_of_length(g, k);
      const bool ok = truth[k] > 0 ? q.verdict == Presence::kPresent && q.witness &&
                                         q.witness->length() == k && validate_cycle(g, *q.witness)
                                   : q.verdict == Presence::kAbsent;
      query.record(ok, where + " k=" + std::to_string(k));
      const auto f = find_cycle_of_length(g, k);
      const bool found_ok = truth[k] > 0 ? f.verdict == Presence::kPresent && f.witness &&
                                               f.witness->length() == k &&
                                               validate_cycle(g, *f.witness)
                                         : f.verdict == Presence::kAbsent;
      search.record(found_ok, where + " k=" + std::to_string(k));
    }
  }
  return SuiteReport{"spectrum-oracle", {counts.check, lengths.check, circ.check, query.check, search.check}};
}

}  // namespace cyclespan
