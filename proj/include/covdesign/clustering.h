#ifndef COVDESIGN_CLUSTERING_H_
#define COVDESIGN_CLUSTERING_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "covdesign/graph.h"
#include "covdesign/matrix.h"
#include "covdesign/partition.h"

namespace covdesign {

// Cluster-level view of a graph: the K x K contact matrix C (directed
// endpoint counts, so each undirected edge is counted in both orientations)
// and the per-cluster degree sums d. C is symmetric, C * 1 = d, and
// sum(C) = sum(d) = 2|E|.
struct ClusterSummary {
  Matrix contact;
  std::vector<double> degree;
  std::vector<int> sizes;
  int num_units = 0;
  double total = 0.0;

  int num_clusters() const { return static_cast<int>(degree.size()); }
};

ClusterSummary build_cluster_summary(const Graph& graph, const Clustering& clustering);

// Newman modularity with a resolution multiplier on the null-model term:
// sum_k C_kk / S - resolution * (d_k / S)^2. Zero for an edgeless graph.
double modularity(const ClusterSummary& summary, double resolution);

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 0;
  int max_levels = 64;
  int max_passes = 1000;
};

struct LouvainResult {
  Clustering clustering;
  // Modularity of the partition after each aggregation level; non-decreasing.
  std::vector<double> level_modularity;
};

// Two-phase Louvain: seeded-order local moves, then community aggregation,
// repeated until no node moves. A move needs strictly positive gain over
// staying put. Cluster ids are numbered by first appearance in node order.
LouvainResult louvain(const Graph& graph, const LouvainOptions& options);

// Rows "unit_id cluster_id". If num_units < 0 it is taken as max id + 1.
// Non-contiguous cluster ids are compacted and `remapped` is set.
Clustering read_clustering(const std::filesystem::path& path, int num_units = -1,
                           bool* remapped = nullptr);
void write_clustering(const Clustering& clustering, const std::filesystem::path& path);

}  // namespace covdesign

#endif  // COVDESIGN_CLUSTERING_H_
