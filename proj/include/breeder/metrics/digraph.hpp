#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "breeder/cppn/genome.hpp"

namespace breeder {

using Edge = std::pair<std::size_t, std::size_t>;

// Simple directed graph on nodes 0..n-1: no self-loops, no parallel edges.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  // Throws Error(InvalidGenome) on self-loops, duplicates or out-of-range ends.
  DirectedGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& successors(std::size_t v) const { return out_[v]; }
  std::size_t out_degree(std::size_t v) const { return out_[v].size(); }
  std::size_t in_degree(std::size_t v) const { return in_degree_[v]; }
  bool has_edge(std::size_t u, std::size_t v) const;

  DirectedGraph reversed() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> in_degree_;
};

struct GenomeGraph {
  DirectedGraph graph;
  std::vector<Innovation> node_ids;  // graph index -> node innovation
};

// Every node gene becomes a vertex (in innovation order); enabled connections
// become edges, disabled ones are left out.
GenomeGraph genome_to_graph(const Genome& genome);

}  // namespace breeder
