#ifndef COVDESIGN_TESTS_FIXTURES_H_
#define COVDESIGN_TESTS_FIXTURES_H_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "covdesign/clustering.h"
#include "covdesign/correlation_root.h"
#include "covdesign/graph.h"
#include "covdesign/partition.h"

namespace covdesign::testing {

inline Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
  return Graph::from_edges(n, edges);
}

// 0 - 1 - 2 - 3
inline Graph path_graph() { return make_graph(4, {{0, 1}, {1, 2}, {2, 3}}); }

// {0,1,2} and {3,4,5}, bridged by 2 - 3.
inline Graph two_triangles() {
  return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

inline Clustering halves(int n) {
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) a[i] = i < n / 2 ? 0 : 1;
  return Clustering(a, 2);
}

inline Clustering singletons(int n) {
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  return Clustering(a, n);
}

inline Clustering one_cluster(int n) { return Clustering(std::vector<int>(n, 0), 1); }

// The acceptance SBM: ten blocks of twenty nodes.
inline PlantedGraph sbm_fixture(std::uint64_t seed = 7) {
  std::vector<int> sizes(10, 20);
  return generate_sbm(sizes, 0.3, 0.02, seed);
}

// A small SBM whose planted blocks give K <= 12.
inline PlantedGraph small_sbm(int blocks, int size, std::uint64_t seed) {
  std::vector<int> sizes(blocks, size);
  return generate_sbm(sizes, 0.6, 0.1, seed);
}

// Random correlation root with unit rows, from an independent generator.
inline Matrix random_root(int k, std::uint64_t seed, double spread = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Matrix r = Matrix::identity(k);
  for (double& x : r.flat()) x += spread * normal(gen);
  return project_rows(r);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("covdesign_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace covdesign::testing

#endif  // COVDESIGN_TESTS_FIXTURES_H_
