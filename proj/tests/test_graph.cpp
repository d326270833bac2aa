#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cyclespan/graph.hpp"
#include "cyclespan/rng.hpp"
#include "cyclespan/samplers.hpp"

using namespace cyclespan;

namespace {

Graph random_multigraph(Vertex n, std::size_t m, Orientation o, SeededStream& s) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i) {
    edges.emplace_back(static_cast<Vertex>(s.below(n)), static_cast<Vertex>(s.below(n)));
  }
  return build_graph(n, o, true, edges);
}

}  // namespace

TEST(BuildGraph, Triangle) {
  const Graph g = build_graph(3, Orientation::kUndirected, false, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(g.num_edges(), 3u);
  for (auto d : degrees(g).out) EXPECT_EQ(d, 2u);
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_TRUE(g.has_edge(2, 0));
}

TEST(BuildGraph, LoopRejectedInSimpleGraph) {
  EXPECT_THROW(build_graph(2, Orientation::kUndirected, false, {{0, 0}}), ValidationError);
}

TEST(BuildGraph, ParallelRejectedInSimpleGraph) {
  EXPECT_THROW(build_graph(3, Orientation::kUndirected, false, {{0, 1}, {1, 0}}),
               ValidationError);
}

TEST(BuildGraph, EndpointOutOfRange) {
  EXPECT_THROW(build_graph(3, Orientation::kUndirected, true, {{0, 3}}), ValidationError);
}

TEST(BuildGraph, DirectedCycle) {
  const Graph g = build_graph(5, Orientation::kDirected, false,
                              {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  const auto deg = degrees(g);
  for (Vertex v = 0; v < 5; ++v) {
    EXPECT_EQ(deg.out[v], 1u);
    EXPECT_EQ(deg.in[v], 1u);
  }
  EXPECT_TRUE(g.has_edge(4, 0));
  EXPECT_FALSE(g.has_edge(0, 4));
  EXPECT_EQ(g, cycle_graph(5, Orientation::kDirected));
}

TEST(BuildGraph, AntiparallelArcsAreSimple) {
  const Graph g = build_graph(2, Orientation::kDirected, false, {{0, 1}, {1, 0}});
  EXPECT_TRUE(g.is_simple());
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(Degrees, CycleSix) {
  for (auto d : degrees(cycle_graph(6)).out) EXPECT_EQ(d, 2u);
}

TEST(Degrees, HamiltonPlusMatchingIsCubic) {
  const Graph c6 = cycle_graph(6);
  std::vector<Edge> edges(c6.edges().begin(), c6.edges().end());
  edges.insert(edges.end(), {{0, 3}, {1, 4}, {2, 5}});
  const Graph g = build_graph(6, Orientation::kUndirected, true, edges);
  for (auto d : degrees(g).out) EXPECT_EQ(d, 3u);
}

TEST(Degrees, LoopCountsTwice) {
  const Graph g = build_graph(2, Orientation::kUndirected, true, {{0, 0}});
  EXPECT_EQ(degrees(g).out[0], 2u);
  EXPECT_EQ(degrees(g).out[1], 0u);
  EXPECT_FALSE(g.is_simple());
}

TEST(Degrees, HandshakeProperty) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    SeededStream s(3, i);
    const Vertex n = 1 + static_cast<Vertex>(s.below(15));
    const auto m = s.below(40);
    for (Orientation o : {Orientation::kUndirected, Orientation::kDirected}) {
      const Graph g = random_multigraph(n, m, o, s);
      const auto deg = degrees(g);
      const auto out = std::accumulate(deg.out.begin(), deg.out.end(), std::uint64_t{0});
      const auto in = std::accumulate(deg.in.begin(), deg.in.end(), std::uint64_t{0});
      if (o == Orientation::kUndirected) {
        EXPECT_EQ(out, 2 * g.num_edges());
      } else {
        EXPECT_EQ(out, g.num_edges());
        EXPECT_EQ(in, g.num_edges());
      }
    }
  }
}

TEST(ValidateCycle, Examples) {
  const Graph c5 = cycle_graph(5);
  EXPECT_TRUE(validate_cycle(c5, {{0, 1, 2, 3, 4}}));
  EXPECT_FALSE(validate_cycle(c5, {{0, 2, 4, 1, 3}}));
  const Graph d5 = cycle_graph(5, Orientation::kDirected);
  EXPECT_TRUE(validate_cycle(d5, {{0, 1, 2, 3, 4}}));
  EXPECT_FALSE(validate_cycle(d5, {{0, 4, 3, 2, 1}}));
}

TEST(ValidateCycle, RejectsRepeatsAndShortSequences) {
  const Graph g = build_graph(4, Orientation::kUndirected, false, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  EXPECT_FALSE(validate_cycle(g, {{0, 1, 2, 1}}));
  EXPECT_FALSE(validate_cycle(g, {{0, 1}}));
  EXPECT_FALSE(validate_cycle(g, {{0, 1, 7}}));
}

TEST(ValidateCycle, RotationAndReversalInvariance) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    SeededStream s(5, i);
    const Vertex n = 4 + static_cast<Vertex>(s.below(10));
    for (Orientation o : {Orientation::kUndirected, Orientation::kDirected}) {
      const Graph g = sample_binomial(n, 0.5, o, s);
      std::vector<Vertex> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), s.engine());
      const auto len = 3 + s.below(n - 2);
      VertexCycle c{{perm.begin(), perm.begin() + static_cast<long>(len)}};
      const bool base = validate_cycle(g, c);
      for (std::size_t r = 0; r < c.length(); ++r) {
        VertexCycle rot = c;
        std::rotate(rot.vertices.begin(), rot.vertices.begin() + static_cast<long>(r),
                    rot.vertices.end());
        EXPECT_EQ(validate_cycle(g, rot), base);
        if (o == Orientation::kUndirected) {
          std::reverse(rot.vertices.begin(), rot.vertices.end());
          EXPECT_EQ(validate_cycle(g, rot), base);
        }
      }
    }
  }
}

TEST(Simplify, SimpleGraphUnchanged) {
  const Graph g = cycle_graph(7);
  const auto [h, rep] = simplify(g);
  EXPECT_EQ(h.edges().size(), g.edges().size());
  EXPECT_TRUE(std::equal(h.edges().begin(), h.edges().end(), g.edges().begin()));
  EXPECT_EQ(rep, SimplifyReport{});
}

TEST(Simplify, ParallelCollapsed) {
  const Graph g = build_graph(2, Orientation::kUndirected, true, {{0, 1}, {1, 0}});
  const auto [h, rep] = simplify(g);
  EXPECT_EQ(h.num_edges(), 1u);
  EXPECT_EQ(rep.parallel_surplus, 1u);
  EXPECT_EQ(rep.loops_removed, 0u);
}

TEST(Simplify, LoopRemoved) {
  const Graph g = build_graph(3, Orientation::kUndirected, true, {{2, 2}, {0, 1}});
  const auto [h, rep] = simplify(g);
  EXPECT_EQ(h.num_edges(), 1u);
  EXPECT_TRUE(h.has_edge(0, 1));
  EXPECT_EQ(rep.loops_removed, 1u);
  EXPECT_TRUE(h.is_simple());
}

TEST(Simplify, Idempotent) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    SeededStream s(9, i);
    for (Orientation o : {Orientation::kUndirected, Orientation::kDirected}) {
      const Graph g = random_multigraph(8, s.below(30), o, s);
      const auto [once, r1] = simplify(g);
      const auto [twice, r2] = simplify(once);
      EXPECT_TRUE(std::equal(once.edges().begin(), once.edges().end(), twice.edges().begin(),
                             twice.edges().end()));
      EXPECT_EQ(r2, SimplifyReport{});
      EXPECT_EQ(r1.loops_removed + r1.parallel_surplus + once.num_edges(), g.num_edges());
    }
  }
}

TEST(EdgeList, RoundTrip) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    SeededStream s(13, i);
    for (Orientation o : {Orientation::kUndirected, Orientation::kDirected}) {
      const Graph g = random_multigraph(1 + static_cast<Vertex>(s.below(12)), s.below(25), o, s);
      EXPECT_EQ(parse_edge_list(to_edge_list(g)), g);
      std::stringstream ss;
      write_edge_list(ss, g);
      EXPECT_EQ(read_edge_list(ss), g);
    }
  }
  const Graph simple = cycle_graph(9);
  EXPECT_EQ(parse_edge_list(to_edge_list(simple)), simple);
}

TEST(EdgeList, MalformedInput) {
  EXPECT_THROW(parse_edge_list(""), ValidationError);
  EXPECT_THROW(parse_edge_list("3 2 U\n0 1\n"), ValidationError);
  EXPECT_THROW(parse_edge_list("3 1 X\n0 1\n"), ValidationError);
  EXPECT_THROW(parse_edge_list("3 1 U\n0 5\n"), ValidationError);
}
