#include "covdesign/graph.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "covdesign/error.h"
#include "covdesign/rng.h"

namespace covdesign {

Graph Graph::from_edges(int n, std::span<const std::pair<int, int>> edges,
                        BuildStats* stats) {
  if (n < 0) throw InvalidArgument("node count must be non-negative");
  BuildStats local;
  Graph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") outside node range [0, " +
                            std::to_string(n) + ")");
    }
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    g.edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  const auto last = std::unique(g.edges_.begin(), g.edges_.end());
  local.duplicates = std::distance(last, g.edges_.end());
  g.edges_.erase(last, g.edges_.end());

  std::vector<int> deg(n, 0);
  for (auto [u, v] : g.edges_) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : g.edges_) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (int i = 0; i < n; ++i) {
    std::sort(g.adjacency_.begin() + g.offsets_[i],
              g.adjacency_.begin() + g.offsets_[i + 1]);
  }
  if (stats != nullptr) *stats = local;
  return g;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n_);
  for (int i = 0; i < n_; ++i) d[i] = degree(i);
  return d;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_id(std::string_view tok, std::int64_t* out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *out);
  return ec == std::errc() && ptr == tok.data() + tok.size() && *out >= 0;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

LoadedGraph load_plain(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::int64_t pinned_nodes = -1;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '#' || toks[0].front() == '%') {
      // "# nodes N" fixes the node count written by write_edge_list.
      if (toks.size() == 3 && toks[0] == "#" && toks[1] == "nodes") {
        if (!parse_id(toks[2], &pinned_nodes))
          throw ParseError(path.string(), lineno, "bad node count");
      }
      continue;
    }
    std::int64_t u = 0;
    std::int64_t v = 0;
    if (toks.size() < 2 || toks.size() > 3 || !parse_id(toks[0], &u) ||
        !parse_id(toks[1], &v)) {
      throw ParseError(path.string(), lineno,
                       "expected two non-negative integer node ids, got '" + line +
                           "'");
    }
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw ParseError(path.string(), lineno, "empty edge set");

  LoadedGraph out;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  if (pinned_nodes >= 0) {
    for (auto [u, v] : raw) {
      if (u >= pinned_nodes || v >= pinned_nodes)
        throw ParseError(path.string(), 0, "node id exceeds declared node count");
      edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    out.original_ids.resize(pinned_nodes);
    for (std::int64_t i = 0; i < pinned_nodes; ++i) out.original_ids[i] = i;
    out.graph = Graph::from_edges(static_cast<int>(pinned_nodes), edges, &out.dropped);
    return out;
  }

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  out.one_based = ids.front() == 1 && ids.back() == static_cast<std::int64_t>(ids.size());
  std::unordered_map<std::int64_t, int> index;
  index.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));
  for (auto [u, v] : raw) edges.emplace_back(index[u], index[v]);
  out.original_ids = std::move(ids);
  out.graph = Graph::from_edges(static_cast<int>(out.original_ids.size()), edges,
                                &out.dropped);
  return out;
}

LoadedGraph load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw ParseError(path.string(), 1, "missing %%MatrixMarket header");
  ++lineno;
  std::string banner = line;
  std::transform(banner.begin(), banner.end(), banner.begin(), ::tolower);
  const auto head = split_ws(banner);
  if (head.size() < 5 || head[1] != "matrix" || head[2] != "coordinate")
    throw ParseError(path.string(), 1, "only 'matrix coordinate' files are supported");
  if (head[4] != "general" && head[4] != "symmetric")
    throw ParseError(path.string(), 1, "unsupported symmetry '" + std::string(head[4]) + "'");

  std::int64_t rows = -1;
  std::int64_t cols = -1;
  std::int64_t nnz = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '%') continue;
    if (rows < 0) {
      if (toks.size() != 3 || !parse_id(toks[0], &rows) || !parse_id(toks[1], &cols) ||
          !parse_id(toks[2], &nnz))
        throw ParseError(path.string(), lineno, "bad size line");
      if (rows != cols) throw ParseError(path.string(), lineno, "matrix is not square");
      edges.reserve(nnz);
      continue;
    }
    std::int64_t u = 0;
    std::int64_t v = 0;
    if (toks.size() < 2 || !parse_id(toks[0], &u) || !parse_id(toks[1], &v) || u == 0 ||
        v == 0 || u > rows || v > rows)
      throw ParseError(path.string(), lineno, "bad entry '" + line + "'");
    edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }
  if (rows < 0) throw ParseError(path.string(), lineno, "missing size line");
  if (edges.empty()) throw ParseError(path.string(), lineno, "empty edge set");
  LoadedGraph out;
  out.one_based = true;
  out.original_ids.resize(rows);
  for (std::int64_t i = 0; i < rows; ++i) out.original_ids[i] = i + 1;
  out.graph = Graph::from_edges(static_cast<int>(rows), edges, &out.dropped);
  return out;
}

bool looks_like_matrix_market(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string first;
  std::getline(in, first);
  return first.rfind("%%MatrixMarket", 0) == 0;
}

}  // namespace

LoadedGraph load_edge_list(const std::filesystem::path& path, EdgeListFormat format) {
  if (format == EdgeListFormat::kAuto) {
    format = looks_like_matrix_market(path) ? EdgeListFormat::kMatrixMarket
                                            : EdgeListFormat::kPlain;
  }
  LoadedGraph g = format == EdgeListFormat::kMatrixMarket ? load_matrix_market(path)
                                                          : load_plain(path);
  if (g.graph.num_edges() == 0)
    throw ParseError(path.string(), 0, "empty edge set after dropping self-loops");
  return g;
}

void write_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# nodes " << graph.num_nodes() << "\n";
  for (auto [u, v] : graph.edges()) out << u << ' ' << v << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_id_map(std::span<const std::int64_t> original_ids,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < original_ids.size(); ++i)
    out << i << ' ' << original_ids[i] << '\n';
}

UnitTreatment expand_treatment(std::span<const std::uint8_t> t,
                               const Clustering& clustering) {
  if (static_cast<int>(t.size()) != clustering.num_clusters()) {
    throw InvalidArgument("cluster treatment has length " + std::to_string(t.size()) +
                          " but clustering has K=" +
                          std::to_string(clustering.num_clusters()));
  }
  UnitTreatment z(clustering.num_units());
  const auto assignment = clustering.assignment();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = t[assignment[i]];
  return z;
}

PlantedGraph generate_sbm(std::span<const int> block_sizes, double p_in, double p_out,
                          std::uint64_t seed) {
  if (block_sizes.empty()) throw InvalidArgument("generate_sbm: empty block list");
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0))
    throw InvalidArgument("generate_sbm: need 0 <= p_out <= p_in <= 1");
  std::vector<int> labels;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] <= 0) throw InvalidArgument("generate_sbm: block sizes must be positive");
    labels.insert(labels.end(), block_sizes[b], static_cast<int>(b));
  }
  const int n = static_cast<int>(labels.size());
  Rng rng(derive_seed(seed, {0x5b3}));
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(labels[u] == labels[v] ? p_in : p_out)) edges.emplace_back(u, v);
    }
  }
  return {Graph::from_edges(n, edges),
          Clustering(std::move(labels), static_cast<int>(block_sizes.size()))};
}

}  // namespace covdesign
