#pragma once

#include <cstddef>
#include <vector>

#include "breeder/metrics/digraph.hpp"

namespace breeder {

// Module assignment per node, ids dense in 0..k-1.
struct Partition {
  std::vector<int> assignment;

  // Relabels arbitrary ids densely in order of first appearance.
  static Partition normalized(const std::vector<int>& raw);
  static Partition single(std::size_t n) { return {std::vector<int>(n, 0)}; }
  int module_count() const;

  bool operator==(const Partition&) const = default;
};

struct PartitionResult {
  Partition partition;
  double q = 0.0;
};

// Directed modularity
//   Q = (1/m) sum_ij [A_ij - k_i^in k_j^out / m] delta(c_i, c_j).
// Evaluated per module as (m * E - sum_c K_c^in K_c^out) / m^2 with exact
// integer numerator, so a single module scores exactly 0.
double modularity_q(const DirectedGraph& graph, const Partition& partition);

struct SpectralOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  // Minimum modularity gain for accepting a split.
  double min_gain = 1e-12;
};

// Recursive spectral bisection on the symmetrized modularity matrix
// (leading eigenvector by shifted power iteration), each bisection refined by
// greedy single-node moves. A group is split only while that raises Q.
PartitionResult optimal_partition(const DirectedGraph& graph, const SpectralOptions& options = {});

constexpr std::size_t kBruteForceMaxNodes = 12;

// Exhaustive maximum over all set partitions (restricted growth strings).
// Throws Error(TooLarge) above kBruteForceMaxNodes nodes.
PartitionResult brute_force_partition(const DirectedGraph& graph);

}  // namespace breeder
