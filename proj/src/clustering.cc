#include "covdesign/clustering.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "covdesign/error.h"

namespace covdesign {

ClusterSummary build_cluster_summary(const Graph& graph, const Clustering& clustering) {
  if (clustering.num_units() != graph.num_nodes()) {
    throw InvalidArgument("clustering covers " + std::to_string(clustering.num_units()) +
                          " units but graph has " + std::to_string(graph.num_nodes()));
  }
  const int k = clustering.num_clusters();
  ClusterSummary s;
  s.contact = Matrix(k, k);
  s.degree.assign(k, 0.0);
  s.sizes = clustering.sizes();
  s.num_units = graph.num_nodes();
  for (auto [u, v] : graph.edges()) {
    const int a = clustering.cluster_of(u);
    const int b = clustering.cluster_of(v);
    s.contact(a, b) += 1.0;
    s.contact(b, a) += 1.0;
  }
  for (int i = 0; i < graph.num_nodes(); ++i)
    s.degree[clustering.cluster_of(i)] += graph.degree(i);
  s.total = 2.0 * static_cast<double>(graph.num_edges());
  return s;
}

double modularity(const ClusterSummary& summary, double resolution) {
  if (summary.total == 0.0) return 0.0;
  double q = 0.0;
  for (int k = 0; k < summary.num_clusters(); ++k) {
    const double share = summary.degree[k] / summary.total;
    q += summary.contact(k, k) / summary.total - resolution * share * share;
  }
  return q;
}

Clustering read_clustering(const std::filesystem::path& path, int num_units,
                           bool* remapped) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::pair<std::int64_t, std::int64_t>> rows;
  std::string line;
  long lineno = 0;
  std::int64_t max_unit = -1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string a;
    std::string b;
    std::string extra;
    if (!(ss >> a) || a.front() == '#') continue;
    std::int64_t unit = -1;
    std::int64_t label = -1;
    const auto pa = std::from_chars(a.data(), a.data() + a.size(), unit);
    bool ok = static_cast<bool>(ss >> b) && !(ss >> extra);
    if (ok) {
      const auto pb = std::from_chars(b.data(), b.data() + b.size(), label);
      ok = pa.ec == std::errc() && pb.ec == std::errc() &&
           pa.ptr == a.data() + a.size() && pb.ptr == b.data() + b.size() &&
           unit >= 0 && label >= 0;
    }
    if (!ok) throw ParseError(path.string(), lineno, "expected 'unit_id cluster_id'");
    rows.emplace_back(unit, label);
    max_unit = std::max(max_unit, unit);
  }
  const std::int64_t n = num_units >= 0 ? num_units : max_unit + 1;
  std::vector<std::int64_t> labels(n, -1);
  for (auto [unit, label] : rows) {
    if (unit >= n)
      throw InvalidArgument(path.string() + ": unit " + std::to_string(unit) +
                            " outside graph of " + std::to_string(n) + " nodes");
    if (labels[unit] >= 0)
      throw InvalidArgument(path.string() + ": duplicate row for unit " +
                            std::to_string(unit));
    labels[unit] = label;
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (labels[i] < 0)
      throw InvalidArgument(path.string() + ": no cluster for unit " + std::to_string(i));
  }
  return Clustering::from_labels(labels, remapped);
}

void write_clustering(const Clustering& clustering, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (int i = 0; i < clustering.num_units(); ++i)
    out << i << ' ' << clustering.cluster_of(i) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace covdesign
