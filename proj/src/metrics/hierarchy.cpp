#include "breeder/metrics/hierarchy.hpp"

#include <algorithm>

#include "breeder/error.hpp"

namespace breeder {

std::vector<double> local_reaching_centrality(const DirectedGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<double> lrc(n, 0.0);
  if (n < 2) return lrc;
  std::vector<std::size_t> mark(n, n);  // mark[v] == source once visited from source
  std::vector<std::size_t> stack;
  for (std::size_t src = 0; src < n; ++src) {
    std::size_t reached = 0;
    mark[src] = src;
    stack.assign(1, src);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : graph.successors(v)) {
        if (mark[w] == src) continue;
        mark[w] = src;
        ++reached;
        stack.push_back(w);
      }
    }
    lrc[src] = static_cast<double>(reached) / static_cast<double>(n - 1);
  }
  return lrc;
}

double grc_hierarchy(const DirectedGraph& graph) {
  const std::size_t n = graph.node_count();
  if (n < 2) throw Error(ErrorCode::TooSmall, "hierarchy needs at least two nodes");
  const auto lrc = local_reaching_centrality(graph.reversed());
  const double top = *std::max_element(lrc.begin(), lrc.end());
  double total = 0.0;
  for (double c : lrc) total += top - c;
  return total / static_cast<double>(n - 1);
}

}  // namespace breeder
