#pragma once

#include <cstdint>
#include <vector>

#include "cyclespan/graph.hpp"

namespace cyclespan {

/// Cycle counts by length (index = length, entries 0..n) from checking every
/// vertex subset in every cyclic order. Undirected cycles count once, directed
/// cycles once per orientation present. Loops and parallel copies are
/// ignored. Exponential; intended for n <= 10.
std::vector<std::uint64_t> brute_force_cycle_counts(const Graph& g);

}  // namespace cyclespan
