#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cyclespan/samplers.hpp"
#include "cyclespan/spectrum.hpp"
#include "cyclespan/switching.hpp"

using namespace cyclespan;

namespace {

double chi_square(const std::vector<std::uint64_t>& observed, double expected) {
  double x = 0;
  for (auto o : observed) x += (double(o) - expected) * (double(o) - expected) / expected;
  return x;
}

bool all_degrees(const Graph& g, std::uint32_t d) {
  const auto deg = degrees(g);
  return std::all_of(deg.out.begin(), deg.out.end(), [d](auto x) { return x == d; });
}

bool contains_cycle(const Graph& g) {
  const Vertex n = g.num_vertices();
  for (Vertex i = 0; i < n; ++i) {
    if (!g.has_edge(i, (i + 1) % n)) return false;
  }
  return true;
}

Graph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return build_graph(10, Orientation::kUndirected, false, e);
}

}  // namespace

TEST(SeededStream, IdenticalIdentityIdenticalSequence) {
  SeededStream a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.engine()();
    EXPECT_EQ(x, b.engine()());
    differs = differs || x != c.engine()();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(mix_stream_seed(42, 7),
            splitmix64(splitmix64(42) ^ splitmix64(7 + 0x632BE59BD9B4E019ULL)));
}

TEST(SeededStream, GeometricGapMean) {
  SeededStream s(1);
  const double p = 0.05;
  double sum = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) sum += double(s.geometric_gap(p));
  const double mean = (1 - p) / p;
  const double sd = std::sqrt((1 - p) / (p * p) / trials);
  EXPECT_NEAR(sum / trials, mean, 4 * sd);
  EXPECT_EQ(s.geometric_gap(0.0), UINT64_MAX);
  EXPECT_EQ(s.geometric_gap(1.0), 0u);
}

TEST(ConfigurationModel, ForcedMatching) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    SeededStream s(2, i);
    const Graph g = sample_configuration_model(2, 1, s);
    ASSERT_EQ(g.num_edges(), 1u);
    EXPECT_EQ(g.edges()[0], Edge(0, 1));
  }
}

TEST(ConfigurationModel, CubicOnFourVertices) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    SeededStream s(3, i);
    const Graph g = sample_configuration_model(4, 3, s);
    EXPECT_EQ(g.num_edges(), 6u);
    EXPECT_TRUE(all_degrees(g, 3));
  }
}

TEST(ConfigurationModel, OddHalfEdgeCountRejected) {
  SeededStream s(0);
  EXPECT_THROW(sample_configuration_model(5, 3, s), ValidationError);
}

TEST(ConfigurationModel, SimplicityProbability) {
  int simple = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(4, static_cast<std::uint64_t>(i));
    simple += sample_configuration_model(1000, 3, s).is_simple();
  }
  EXPECT_NEAR(double(simple) / trials, std::exp(-2.0), 0.03);
}

TEST(RegularSimple, FourVerticesIsK4) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    SeededStream s(5, i);
    const auto r = sample_regular_simple(4, 3, s);
    EXPECT_EQ(r.graph.num_edges(), 6u);
    EXPECT_TRUE(r.graph.is_simple());
    EXPECT_GE(r.attempts, 1u);
  }
}

TEST(RegularSimple, OutputsAreSimpleRegular) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    SeededStream s(6, i);
    const auto r = sample_regular_simple(60, 3, s);
    EXPECT_TRUE(r.graph.is_simple());
    EXPECT_TRUE(all_degrees(r.graph, 3));
    EXPECT_EQ(simplify(r.graph).second, SimplifyReport{});
  }
}

TEST(RegularSimple, Deterministic) {
  SeededStream a(77, 3), b(77, 3);
  EXPECT_EQ(sample_regular_simple(100, 3, a).graph, sample_regular_simple(100, 3, b).graph);
}

TEST(RegularSimple, ExhaustedAttemptsThrow) {
  // The only 3-regular multigraph on 2 vertices is a triple edge, never simple.
  SeededStream s(0);
  EXPECT_THROW(sample_regular_simple(2, 3, s, 5), SamplingError);
}

TEST(PerfectMatching, UniformOnSixVertices) {
  std::map<std::vector<Edge>, std::uint64_t> freq;
  const int trials = 15000;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(8, static_cast<std::uint64_t>(i));
    auto m = sample_perfect_matching(6, s);
    for (auto& e : m) e = {std::min(e.first, e.second), std::max(e.first, e.second)};
    std::sort(m.begin(), m.end());
    ++freq[m];
  }
  ASSERT_EQ(freq.size(), 15u);
  std::vector<std::uint64_t> obs;
  for (auto& [m, c] : freq) obs.push_back(c);
  EXPECT_LT(chi_square(obs, trials / 15.0), 36.1);  // 14 dof, p = 0.001
}

TEST(HamPlusMatching, UniformOverMatchingsOfK4) {
  std::vector<std::uint64_t> obs(3, 0);
  const int trials = 3000;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(9, static_cast<std::uint64_t>(i));
    const Graph g = sample_ham_plus_matching(4, s);
    ASSERT_TRUE(all_degrees(g, 3));
    ASSERT_EQ(g.num_edges(), 6u);
    ASSERT_TRUE(contains_cycle(g));
    if (g.has_edge(0, 2)) {
      ++obs[0];
    } else if (g.multiplicity(0, 1) == 2) {
      ++obs[1];
    } else {
      ASSERT_EQ(g.multiplicity(0, 3), 2u);
      ++obs[2];
    }
  }
  EXPECT_LT(chi_square(obs, trials / 3.0), 13.8);  // 2 dof, p = 0.001
}

TEST(HamPlusMatching, EdgeCountAndDeterminism) {
  for (Vertex n : {4u, 6u, 10u, 50u}) {
    SeededStream s(10, n), t(10, n);
    const Graph g = sample_ham_plus_matching(n, s);
    EXPECT_EQ(g.num_edges(), n + n / 2);
    EXPECT_TRUE(contains_cycle(g));
    EXPECT_EQ(g, sample_ham_plus_matching(n, t));
  }
  SeededStream s(0);
  EXPECT_THROW(sample_ham_plus_matching(5, s), ValidationError);
}

TEST(HamPlusHam, TriangleDoubled) {
  SeededStream s(11);
  const Graph g = sample_ham_plus_ham(3, s);
  EXPECT_EQ(g.num_edges(), 6u);
  EXPECT_EQ(g.multiplicity(0, 1), 2u);
  EXPECT_EQ(g.multiplicity(1, 2), 2u);
  EXPECT_EQ(g.multiplicity(0, 2), 2u);
}

TEST(HamPlusHam, DegreesFour) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    SeededStream s(12, i);
    const Vertex n = 3 + static_cast<Vertex>(i);
    const Graph g = sample_ham_plus_ham(n, s);
    EXPECT_EQ(g.num_edges(), 2u * n);
    EXPECT_TRUE(all_degrees(g, 4));
    EXPECT_TRUE(contains_cycle(g));
  }
}

TEST(HamPlusHam, UniformOverHamiltonCyclesOfK4) {
  std::vector<std::uint64_t> obs(3, 0);
  const int trials = 3000;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(13, static_cast<std::uint64_t>(i));
    const Graph g = sample_ham_plus_ham(4, s);
    if (!g.has_edge(0, 2)) {
      ++obs[0];
    } else if (g.multiplicity(0, 1) == 2) {
      ++obs[1];
    } else {
      ASSERT_EQ(g.multiplicity(0, 3), 2u);
      ++obs[2];
    }
  }
  EXPECT_LT(chi_square(obs, trials / 3.0), 13.8);
}

TEST(HamPlusBinomial, Extremes) {
  SeededStream s(14);
  EXPECT_EQ(sample_ham_plus_binomial(9, 0.0, Orientation::kUndirected, s), cycle_graph(9));
  EXPECT_EQ(sample_ham_plus_binomial(9, 0.0, Orientation::kDirected, s),
            cycle_graph(9, Orientation::kDirected));
  const Graph k = sample_ham_plus_binomial(9, 1.0, Orientation::kUndirected, s);
  EXPECT_EQ(k.num_edges(), 36u);
  EXPECT_TRUE(k.is_simple());
  const Graph d = sample_ham_plus_binomial(9, 1.0, Orientation::kDirected, s);
  EXPECT_EQ(d.num_edges(), 72u);
}

TEST(HamPlusBinomial, ExtraEdgeMean) {
  const Vertex n = 200;
  const double p = 2.0 / n;
  const int trials = 500;
  const double pairs = double(n) * (n - 1) / 2 - n;
  double sum = 0;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(15, static_cast<std::uint64_t>(i));
    const Graph g = sample_ham_plus_binomial(n, p, Orientation::kUndirected, s);
    ASSERT_TRUE(contains_cycle(g));
    sum += double(g.num_edges() - n);
  }
  EXPECT_NEAR(sum / trials, p * pairs, 3 * std::sqrt(pairs * p * (1 - p) / trials));
}

TEST(Binomial, Extremes) {
  SeededStream s(16);
  EXPECT_EQ(sample_binomial(30, 0.0, Orientation::kUndirected, s).num_edges(), 0u);
  EXPECT_EQ(sample_binomial(100, 1.0, Orientation::kDirected, s).num_edges(), 9900u);
  EXPECT_EQ(sample_binomial(100, 1.0, Orientation::kUndirected, s).num_edges(), 4950u);
  EXPECT_THROW(sample_binomial(10, 1.5, Orientation::kUndirected, s), ValidationError);
}

TEST(Binomial, EdgeCountMean) {
  const Vertex n = 500;
  const double p = 3.0 / n;
  const int trials = 400;
  for (Orientation o : {Orientation::kUndirected, Orientation::kDirected}) {
    const double pairs = double(n) * (n - 1) / (o == Orientation::kDirected ? 1 : 2);
    double sum = 0;
    for (int i = 0; i < trials; ++i) {
      SeededStream s(17, static_cast<std::uint64_t>(i));
      const Graph g = sample_binomial(n, p, o, s);
      ASSERT_TRUE(g.is_simple());
      sum += double(g.num_edges());
    }
    EXPECT_NEAR(sum / trials, p * pairs, 3 * std::sqrt(pairs * p * (1 - p) / trials));
  }
}

TEST(Binomial, PairMarginalUniform) {
  // Geometric skipping must not favour early or late pairs.
  const Vertex n = 12;
  const double p = 0.3;
  const int trials = 4000;
  std::map<Edge, int> hits;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(18, static_cast<std::uint64_t>(i));
    const Graph g = sample_binomial(n, p, Orientation::kDirected, s);
    for (const Edge& e : g.edges()) ++hits[e];
  }
  const double sd = std::sqrt(p * (1 - p) / trials);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      EXPECT_NEAR(hits[Edge(u, v)] / double(trials), p, 4.5 * sd) << u << "->" << v;
    }
  }
}

TEST(Sprinkle, Probability) {
  EXPECT_DOUBLE_EQ(sprinkle_probability(0.5, 0.25), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(sprinkle_probability(0.2, 0.2), 0.0);
  EXPECT_THROW(sprinkle_probability(0.2, 0.3), ValidationError);
}

TEST(Sprinkle, EqualProbabilitiesLeaveGraphUnchanged) {
  SeededStream s(19);
  const Graph base = sample_binomial(40, 0.1, Orientation::kUndirected, s);
  EXPECT_EQ(sprinkle(base, 0.1, 0.1, s), base);
}

TEST(Sprinkle, SupersetAndMarginal) {
  const Vertex n = 40;
  const double p = 0.15, pp = 0.05;
  const int trials = 3000;
  std::map<Edge, int> hits;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(20, static_cast<std::uint64_t>(i));
    const Graph base = sample_binomial(n, pp, Orientation::kUndirected, s);
    const Graph g = sprinkle(base, p, pp, s);
    for (const Edge& e : base.edges()) ASSERT_TRUE(g.has_edge(e.first, e.second));
    for (const Edge& e : g.edges()) ++hits[e];
  }
  const double sd = std::sqrt(p * (1 - p) / trials);
  for (Vertex u = 0; u < 10; ++u) {
    EXPECT_NEAR(hits[Edge(u, u + 20)] / double(trials), p, 3.5 * sd);
  }
}

TEST(CoupleContract, PetersenSingleEdge) {
  const Graph g = petersen();
  int checked = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    SeededStream s(21, i);
    const auto out = couple_contract(g, 1, s);
    EXPECT_EQ(out.contracted.num_vertices(), 8u);
    EXPECT_TRUE(out.e1_holds);
    if (!(out.e1_holds && out.e2_holds)) continue;
    ++checked;
    EXPECT_TRUE(all_degrees(out.contracted, 3));
    EXPECT_EQ(out.added_edges.size(), 2u);
    ASSERT_EQ(out.selected_edges.size(), 1u);
    const auto [u, v] = out.selected_edges[0];
    EXPECT_TRUE(g.has_edge(u, v));
    EXPECT_EQ(out.vertex_map[u], CouplingOutcome::kDeleted);
    EXPECT_EQ(out.vertex_map[v], CouplingOutcome::kDeleted);
  }
  EXPECT_GT(checked, 0);
}

TEST(CoupleContract, Preconditions) {
  SeededStream s(22);
  EXPECT_THROW(couple_contract(petersen(), 5, s), ValidationError);
  EXPECT_THROW(couple_contract(cycle_graph(10), 1, s), ValidationError);
}

TEST(CoupleContract, VertexCountAndBoundedAdditions) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    SeededStream s(23, i);
    const Graph g = sample_regular_simple(30, 3, s).graph;
    const std::uint32_t ell = 1 + static_cast<std::uint32_t>(s.below(6));
    const auto out = couple_contract(g, ell, s);
    EXPECT_EQ(out.contracted.num_vertices(), 30 - 2 * ell);
    EXPECT_LE(out.added_edges.size(), 2u * ell);
    if (out.e1_holds && out.e2_holds) {
      EXPECT_TRUE(all_degrees(out.contracted, 3));
    }
  }
}

TEST(CoupleContract, BadEventsRare) {
  int bad = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(24, static_cast<std::uint64_t>(i));
    const Graph g = sample_regular_simple(400, 3, s).graph;
    const auto out = couple_contract(g, 2, s);
    bad += !(out.e1_holds && out.e2_holds);
  }
  EXPECT_LE(double(bad) / trials, 0.1);
}

TEST(CoupleContract, TriangleMeanMatchesDirectSample) {
  const int trials = 5000;
  double sum_h = 0, sq_h = 0, sum_g = 0, sq_g = 0;
  int kept = 0;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(25, static_cast<std::uint64_t>(i));
    const Graph g = sample_regular_simple(12, 3, s).graph;
    const auto out = couple_contract(g, 1, s);
    if (out.e1_holds && out.e2_holds) {
      const double t = double(count_short_cycles(out.contracted, 3)[3]);
      sum_h += t;
      sq_h += t * t;
      ++kept;
    }
    SeededStream r(26, static_cast<std::uint64_t>(i));
    const double t = double(count_short_cycles(sample_regular_simple(10, 3, r).graph, 3)[3]);
    sum_g += t;
    sq_g += t * t;
  }
  ASSERT_GT(kept, trials / 2);
  const double mh = sum_h / kept, mg = sum_g / trials;
  const double vh = sq_h / kept - mh * mh, vg = sq_g / trials - mg * mg;
  EXPECT_NEAR(mh, mg, 3 * std::sqrt(vh / kept + vg / trials));
}

TEST(StagedRegular, DefaultStageSizes) {
  const auto sz = default_regular_stage_sizes(1000);
  EXPECT_EQ(sz.t1, 62u);
  EXPECT_EQ(sz.t2, 2u);
}

TEST(StagedRegular, FullMatchingUniform) {
  // Stage sizes overridden: the defaults are zero at n = 8.
  std::map<std::vector<Edge>, std::uint64_t> freq;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    SeededStream s(27, static_cast<std::uint64_t>(i));
    const auto o = staged_exposure_regular(8, 4, RegularStageSizes{1, 2}, s);
    ASSERT_EQ(o.matching.size(), 4u);
    ++freq[o.matching];
  }
  ASSERT_EQ(freq.size(), 105u);
  std::vector<std::uint64_t> obs;
  for (auto& [m, c] : freq) obs.push_back(c);
  EXPECT_LT(chi_square(obs, trials / 105.0), 153.0);  // 104 dof, p = 0.001
}
