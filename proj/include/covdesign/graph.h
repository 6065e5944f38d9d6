#ifndef COVDESIGN_GRAPH_H_
#define COVDESIGN_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "covdesign/partition.h"

namespace covdesign {

// Undirected simple graph on nodes 0..n-1, stored as sorted CSR adjacency.
// Immutable once built.
class Graph {
 public:
  struct BuildStats {
    std::int64_t self_loops = 0;
    std::int64_t duplicates = 0;  // repeated pairs, either orientation
  };

  Graph() = default;
  // Self-loops and duplicate pairs are dropped (and counted in `stats`).
  // Throws InvalidArgument for ids outside [0, n).
  static Graph from_edges(int n, std::span<const std::pair<int, int>> edges,
                          BuildStats* stats = nullptr);

  int num_nodes() const { return n_; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(edges_.size()); }
  // Each edge once, as (u, v) with u < v, sorted.
  std::span<const std::pair<int, int>> edges() const { return edges_; }
  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
  std::span<const int> neighbors(int i) const {
    return {adjacency_.data() + offsets_[i],
            static_cast<std::size_t>(degree(i))};
  }
  std::vector<int> degrees() const;
  double mean_degree() const {
    return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / n_;
  }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> offsets_{0};
  std::vector<int> adjacency_;
};

enum class EdgeListFormat { kPlain, kMatrixMarket, kAuto };

struct LoadedGraph {
  Graph graph;
  // original_ids[i] is the id node i carried in the source file.
  std::vector<std::int64_t> original_ids;
  bool one_based = false;
  Graph::BuildStats dropped;
};

// Plain format: one "u v" pair per line (a third weight column is ignored),
// '#' or '%' comments. Ids are remapped to 0..n-1 in increasing id order, so
// 0-based dense ids map to themselves and 1-based ones shift down by one. A
// "# nodes N" line pins n and disables remapping.
// Matrix Market: coordinate pattern/integer/real, general or symmetric,
// square, 1-based; every row index up to the declared size becomes a node.
LoadedGraph load_edge_list(const std::filesystem::path& path,
                           EdgeListFormat format = EdgeListFormat::kAuto);

// Writes the plain format, including the "# nodes N" line.
void write_edge_list(const Graph& graph, const std::filesystem::path& path);

// Writes "node original_id" rows.
void write_id_map(std::span<const std::int64_t> original_ids,
                  const std::filesystem::path& path);

// Unit treatment vector z in {0,1}^n.
using UnitTreatment = std::vector<std::uint8_t>;
// Cluster treatment vector t in {0,1}^K.
using ClusterTreatment = std::vector<std::uint8_t>;

// z_i = t_{k(i)}.
UnitTreatment expand_treatment(std::span<const std::uint8_t> t,
                               const Clustering& clustering);

struct PlantedGraph {
  Graph graph;
  Clustering blocks;
};

// Stochastic block model with consecutive node ids per block. Each
// within-block pair is an edge with probability p_in, each cross-block pair
// with probability p_out.
PlantedGraph generate_sbm(std::span<const int> block_sizes, double p_in,
                          double p_out, std::uint64_t seed);

}  // namespace covdesign

#endif  // COVDESIGN_GRAPH_H_
