#include "breeder/metrics/modularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <unordered_map>

#include "breeder/error.hpp"

namespace breeder {

Partition Partition::normalized(const std::vector<int>& raw) {
  std::unordered_map<int, int> relabel;
  Partition out;
  out.assignment.reserve(raw.size());
  for (int id : raw) {
    auto [it, inserted] = relabel.try_emplace(id, static_cast<int>(relabel.size()));
    out.assignment.push_back(it->second);
  }
  return out;
}

int Partition::module_count() const {
  return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

namespace {

void require_edges(const DirectedGraph& graph) {
  if (graph.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "modularity needs at least one edge");
}

// m * (edges inside modules) - sum over modules of K_in * K_out.
std::int64_t q_numerator(const DirectedGraph& graph, const std::vector<int>& assignment, int modules) {
  std::vector<std::int64_t> k_in(static_cast<std::size_t>(modules), 0);
  std::vector<std::int64_t> k_out(static_cast<std::size_t>(modules), 0);
  std::int64_t inside = 0;
  for (const auto& [u, v] : graph.edges()) {
    const int cu = assignment[u];
    const int cv = assignment[v];
    ++k_out[static_cast<std::size_t>(cu)];
    ++k_in[static_cast<std::size_t>(cv)];
    inside += cu == cv;
  }
  std::int64_t expected = 0;
  for (std::size_t c = 0; c < k_in.size(); ++c) expected += k_in[c] * k_out[c];
  return static_cast<std::int64_t>(graph.edge_count()) * inside - expected;
}

double q_from_numerator(std::int64_t numerator, std::size_t m) {
  const double md = static_cast<double>(m);
  return static_cast<double>(numerator) / (md * md);
}

using Matrix = std::vector<std::vector<double>>;

// S = B + B^T with B_ij = A_ij - k_i^in k_j^out / m.
Matrix symmetric_modularity_matrix(const DirectedGraph& graph) {
  const std::size_t n = graph.node_count();
  const double m = static_cast<double>(graph.edge_count());
  Matrix s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s[i][j] = -(static_cast<double>(graph.in_degree(i) * graph.out_degree(j)) +
                  static_cast<double>(graph.in_degree(j) * graph.out_degree(i))) /
                m;
    }
  }
  for (const auto& [u, v] : graph.edges()) {
    s[u][v] += 1.0;
    s[v][u] += 1.0;
  }
  return s;
}

// Generalized matrix of a group: S restricted to the group with each diagonal
// entry reduced by its row sum inside the group.
Matrix group_matrix(const Matrix& s, const std::vector<std::size_t>& group) {
  const std::size_t g = group.size();
  Matrix b(g, std::vector<double>(g, 0.0));
  for (std::size_t a = 0; a < g; ++a) {
    double row = 0.0;
    for (std::size_t c = 0; c < g; ++c) {
      b[a][c] = s[group[a]][group[c]];
      row += b[a][c];
    }
    b[a][a] -= row;
  }
  return b;
}

std::vector<double> leading_eigenvector(const Matrix& b, const SpectralOptions& options) {
  const std::size_t g = b.size();
  double shift = 0.0;
  for (std::size_t c = 0; c < g; ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < g; ++r) col += std::abs(b[r][c]);
    shift = std::max(shift, col);
  }

  // Fixed pseudo-random start so the vector is not orthogonal to the target.
  std::mt19937 start(0x5eed);
  std::vector<double> v(g);
  for (auto& x : v) x = static_cast<double>(start()) / 4294967296.0 - 0.5;

  auto normalize = [](std::vector<double>& x) {
    double norm = 0.0;
    for (double e : x) norm += e * e;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& e : x) e /= norm;
    }
  };
  normalize(v);
  std::vector<double> next(g);
  for (int it = 0; it < options.max_iterations; ++it) {
    for (std::size_t r = 0; r < g; ++r) {
      double acc = shift * v[r];
      for (std::size_t c = 0; c < g; ++c) acc += b[r][c] * v[c];
      next[r] = acc;
    }
    normalize(next);
    double change = 0.0;
    for (std::size_t r = 0; r < g; ++r) change = std::max(change, std::abs(next[r] - v[r]));
    v.swap(next);
    if (change < options.tolerance) break;
  }
  return v;
}

// Greedy refinement of a two-way split: repeatedly flip the node with the
// largest positive modularity gain. Returns the gain of the final split
// relative to keeping the group whole, in units of Q.
double refine_split(const Matrix& b, std::vector<int>& sign, double m, const SpectralOptions& options) {
  const std::size_t g = b.size();
  std::vector<double> r(g, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) r[i] += b[i][j] * sign[j];
  }
  const std::size_t budget = g * g;
  for (std::size_t move = 0; move < budget; ++move) {
    std::size_t best = g;
    double best_gain = options.min_gain;
    for (std::size_t k = 0; k < g; ++k) {
      const double gain = -sign[k] * (r[k] - b[k][k] * sign[k]) / m;
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      }
    }
    if (best == g) break;
    const int old = sign[best];
    for (std::size_t j = 0; j < g; ++j) r[j] -= 2.0 * b[j][best] * old;
    sign[best] = -old;
  }
  double quad = 0.0;
  for (std::size_t i = 0; i < g; ++i) quad += sign[i] * r[i];
  return quad / (4.0 * m);
}

}  // namespace

double modularity_q(const DirectedGraph& graph, const Partition& partition) {
  require_edges(graph);
  if (partition.assignment.size() != graph.node_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "partition does not cover the graph");
  }
  const Partition dense = Partition::normalized(partition.assignment);
  return q_from_numerator(q_numerator(graph, dense.assignment, dense.module_count()), graph.edge_count());
}

PartitionResult optimal_partition(const DirectedGraph& graph, const SpectralOptions& options) {
  require_edges(graph);
  const std::size_t n = graph.node_count();
  const double m = static_cast<double>(graph.edge_count());
  const Matrix s = symmetric_modularity_matrix(graph);

  std::vector<int> assignment(n, 0);
  int next_module = 1;
  std::deque<std::vector<std::size_t>> pending;
  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  pending.push_back(everyone);

  while (!pending.empty()) {
    std::vector<std::size_t> group = std::move(pending.front());
    pending.pop_front();
    if (group.size() < 2) continue;

    const Matrix b = group_matrix(s, group);
    const std::vector<double> v = leading_eigenvector(b, options);
    std::vector<int> sign(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) sign[i] = v[i] >= 0.0 ? 1 : -1;
    const double gain = refine_split(b, sign, m, options);

    std::vector<std::size_t> plus, minus;
    for (std::size_t i = 0; i < group.size(); ++i) (sign[i] > 0 ? plus : minus).push_back(group[i]);
    if (gain <= options.min_gain || plus.empty() || minus.empty()) continue;

    const int fresh = next_module++;
    for (std::size_t node : minus) assignment[node] = fresh;
    pending.push_back(std::move(plus));
    pending.push_back(std::move(minus));
  }

  PartitionResult result{Partition::normalized(assignment), 0.0};
  result.q = modularity_q(graph, result.partition);
  return result;
}

PartitionResult brute_force_partition(const DirectedGraph& graph) {
  require_edges(graph);
  const std::size_t n = graph.node_count();
  if (n > kBruteForceMaxNodes) {
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " nodes exceeds the exhaustive limit of " +
                                         std::to_string(kBruteForceMaxNodes));
  }
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(n, 0);
  std::vector<int> prefix_max(n, 0);
  std::vector<int> best = a;
  std::int64_t best_num = q_numerator(graph, a, 1);
  while (n >= 2) {
    // Rightmost position that can still grow.
    std::size_t i = n - 1;
    while (i >= 1 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
    const std::int64_t num = q_numerator(graph, a, prefix_max[n - 1] + 1);
    if (num > best_num) {
      best_num = num;
      best = a;
    }
  }
  return {Partition{best}, q_from_numerator(best_num, graph.edge_count())};
}

}  // namespace breeder
