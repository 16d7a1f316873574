#pragma once

#include <vector>

#include "breeder/metrics/digraph.hpp"

namespace breeder {

// Fraction of the other n - 1 nodes reachable from each node.
std::vector<double> local_reaching_centrality(const DirectedGraph& graph);

// Global reaching centrality of the edge-reversed graph, with local reaching
// centrality counted purely by reachable nodes (weights ignored):
//   sum_i (max_j C(j) - C(i)) / (n - 1).
// Throws Error(TooSmall) for fewer than two nodes.
double grc_hierarchy(const DirectedGraph& graph);

}  // namespace breeder
