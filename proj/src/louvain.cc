#include <algorithm>
#include <numeric>

#include "covdesign/clustering.h"
#include "covdesign/error.h"
#include "covdesign/rng.h"

namespace covdesign {
namespace {

// Weighted graph at one aggregation level. Each undirected edge appears in
// both endpoint lists; `internal` holds the directed weight already folded
// inside a super-node (the C_kk of the previous level).
struct LevelGraph {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> targets;
  std::vector<double> weights;
  std::vector<double> internal;
  std::vector<double> strength;
  double total = 0.0;  // sum of strengths, 2m
};

LevelGraph from_graph(const Graph& g) {
  LevelGraph lg;
  lg.n = g.num_nodes();
  lg.offsets.assign(lg.n + 1, 0);
  for (int i = 0; i < lg.n; ++i) lg.offsets[i + 1] = lg.offsets[i] + g.degree(i);
  lg.targets.reserve(lg.offsets[lg.n]);
  for (int i = 0; i < lg.n; ++i)
    for (int j : g.neighbors(i)) lg.targets.push_back(j);
  lg.weights.assign(lg.targets.size(), 1.0);
  lg.internal.assign(lg.n, 0.0);
  lg.strength.resize(lg.n);
  for (int i = 0; i < lg.n; ++i) lg.strength[i] = g.degree(i);
  lg.total = 2.0 * static_cast<double>(g.num_edges());
  return lg;
}

// One level of local moves. Returns true if any node changed community.
bool local_moves(const LevelGraph& g, double resolution, std::uint64_t seed, int level,
                 int max_passes, std::vector<int>& community) {
  std::vector<double> tot(g.strength);
  std::vector<double> link(g.n, 0.0);
  std::vector<int> touched;
  touched.reserve(64);
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  bool any_move = false;
  for (int pass = 0; pass < max_passes; ++pass) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(level),
                               static_cast<std::uint64_t>(pass)}));
    std::shuffle(order.begin(), order.end(), rng.engine());
    bool moved = false;
    for (int i : order) {
      const int current = community[i];
      const double ki = g.strength[i];
      touched.clear();
      touched.push_back(current);
      link[current] = 0.0;
      for (int e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
        const int c = community[g.targets[e]];
        if (g.targets[e] == i) continue;
        if (link[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end())
          touched.push_back(c);
        link[c] += g.weights[e];
      }
      tot[current] -= ki;
      const double scale = resolution * ki / g.total;
      int best = current;
      double best_gain = link[current] - scale * tot[current];
      for (int c : touched) {
        const double gain = link[c] - scale * tot[c];
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += ki;
      if (best != current) {
        community[i] = best;
        moved = true;
      }
      for (int c : touched) link[c] = 0.0;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

// Renumbers communities by first appearance; returns the count.
int renumber(std::vector<int>& community) {
  std::vector<int> remap(community.size(), -1);
  int next = 0;
  for (int& c : community) {
    if (remap[c] < 0) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& community, int k) {
  LevelGraph out;
  out.n = k;
  out.internal.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  out.total = g.total;
  std::vector<std::vector<std::pair<int, double>>> rows(k);
  std::vector<double> acc(k, 0.0);
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < g.n; ++i) members[community[i]].push_back(i);
  for (int c = 0; c < k; ++c) {
    std::vector<int> seen;
    for (int i : members[c]) {
      out.internal[c] += g.internal[i];
      out.strength[c] += g.strength[i];
      for (int e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
        const int d = community[g.targets[e]];
        if (d == c) {
          out.internal[c] += g.weights[e];
        } else {
          if (acc[d] == 0.0) seen.push_back(d);
          acc[d] += g.weights[e];
        }
      }
    }
    std::sort(seen.begin(), seen.end());
    for (int d : seen) {
      rows[c].emplace_back(d, acc[d]);
      acc[d] = 0.0;
    }
  }
  out.offsets.assign(k + 1, 0);
  for (int c = 0; c < k; ++c)
    out.offsets[c + 1] = out.offsets[c] + static_cast<int>(rows[c].size());
  for (int c = 0; c < k; ++c) {
    for (auto [d, w] : rows[c]) {
      out.targets.push_back(d);
      out.weights.push_back(w);
    }
  }
  return out;
}

}  // namespace

LouvainResult louvain(const Graph& graph, const LouvainOptions& options) {
  if (graph.num_nodes() == 0) throw InvalidArgument("louvain: empty graph");
  if (!(options.resolution > 0.0))
    throw InvalidArgument("louvain: resolution must be positive");
  const int n = graph.num_nodes();
  std::vector<int> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0);
  LouvainResult result;
  if (graph.num_edges() == 0) {
    result.clustering = Clustering(assignment, n);
    result.level_modularity.push_back(0.0);
    return result;
  }

  LevelGraph level_graph = from_graph(graph);
  // assignment[u] is the level-graph node holding unit u.
  for (int level = 0; level < options.max_levels; ++level) {
    std::vector<int> community(level_graph.n);
    std::iota(community.begin(), community.end(), 0);
    if (!local_moves(level_graph, options.resolution, options.seed, level,
                     options.max_passes, community))
      break;
    const int k = renumber(community);
    for (int& a : assignment) a = community[a];
    std::vector<int> labels(assignment);
    const int labelled = renumber(labels);
    result.level_modularity.push_back(modularity(
        build_cluster_summary(graph, Clustering(std::move(labels), labelled)),
        options.resolution));
    if (k == level_graph.n) break;
    level_graph = aggregate(level_graph, community, k);
  }
  const int k = renumber(assignment);
  result.clustering = Clustering(assignment, k);
  if (result.level_modularity.empty())
    result.level_modularity.push_back(
        modularity(build_cluster_summary(graph, result.clustering), options.resolution));
  return result;
}

}  // namespace covdesign
