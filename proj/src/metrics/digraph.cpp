#include "breeder/metrics/digraph.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>

#include "breeder/error.hpp"

namespace breeder {

DirectedGraph::DirectedGraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), out_(n), in_degree_(n, 0) {
  std::set<Edge> seen;
  for (const auto& [u, v] : edges_) {
    if (u >= n || v >= n) throw Error(ErrorCode::InvalidGenome, "edge endpoint out of range");
    if (u == v) throw Error(ErrorCode::InvalidGenome, "self-loop on node " + std::to_string(u));
    if (!seen.insert({u, v}).second) {
      throw Error(ErrorCode::InvalidGenome, "duplicate edge " + std::to_string(u) + "->" + std::to_string(v));
    }
    out_[u].push_back(v);
    ++in_degree_[v];
  }
  for (auto& succ : out_) std::sort(succ.begin(), succ.end());
}

bool DirectedGraph::has_edge(std::size_t u, std::size_t v) const {
  return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

DirectedGraph DirectedGraph::reversed() const {
  std::vector<Edge> flipped;
  flipped.reserve(edges_.size());
  for (const auto& [u, v] : edges_) flipped.emplace_back(v, u);
  return DirectedGraph(n_, std::move(flipped));
}

GenomeGraph genome_to_graph(const Genome& genome) {
  GenomeGraph out;
  std::unordered_map<Innovation, std::size_t> index;
  for (const auto& n : genome.nodes) {
    index[n.innovation] = out.node_ids.size();
    out.node_ids.push_back(n.innovation);
  }
  std::vector<Edge> edges;
  for (const auto& c : genome.connections) {
    if (c.enabled) edges.emplace_back(index.at(c.source), index.at(c.target));
  }
  out.graph = DirectedGraph(out.node_ids.size(), std::move(edges));
  return out;
}

}  // namespace breeder
