#include "cyclespan/oracle.hpp"

#include <algorithm>
#include <string>

namespace cyclespan {

std::vector<std::uint64_t> brute_force_cycle_counts(const Graph& g) {
  const Vertex n = g.num_vertices();
  if (n > 12) throw ValidationError("brute-force oracle limited to 12 vertices");
  std::vector<std::uint64_t> counts(n + 1, 0);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [u, v] : g.edges()) {
    if (u == v) continue;
    adj[u][v] = 1;
    if (!g.directed()) adj[v][u] = 1;
  }
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int k = __builtin_popcount(mask);
    if (k < 3) continue;
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v) {
      if (mask & (1u << v)) order.push_back(v);
    }
    // Fix the smallest vertex first; permute the rest.
    do {
      if (!g.directed() && order[1] > order.back()) continue;
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) ok = adj[order[i]][order[(i + 1) % k]];
      if (ok) ++counts[k];
    } while (std::next_permutation(order.begin() + 1, order.end()));
  }
  return counts;
}

}  // namespace cyclespan
