#include "covdesign/graph.h"

#include <gtest/gtest.h>

#include "covdesign/error.h"
#include "fixtures.h"

namespace covdesign {
namespace {

using testing::TempDir;
using testing::write_text;

TEST(Graph, PathDegrees) {
  Graph g = testing::path_graph();
  EXPECT_EQ(g.num_nodes(), 4);
  EXPECT_EQ(g.num_edges(), 3);
  EXPECT_EQ(g.degrees(), (std::vector<int>{1, 2, 2, 1}));
  EXPECT_DOUBLE_EQ(g.mean_degree(), 1.5);
  auto nb = g.neighbors(1);
  EXPECT_EQ(std::vector<int>(nb.begin(), nb.end()), (std::vector<int>{0, 2}));
}

TEST(Graph, DropsSelfLoopsAndDuplicates) {
  std::vector<std::pair<int, int>> edges{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}};
  Graph::BuildStats stats;
  Graph g = Graph::from_edges(3, edges, &stats);
  EXPECT_EQ(g.num_edges(), 2);
  EXPECT_EQ(stats.self_loops, 1);
  EXPECT_EQ(stats.duplicates, 2);
  EXPECT_EQ(g.degree(2), 1);
}

TEST(Graph, RejectsOutOfRangeIds) {
  std::vector<std::pair<int, int>> edges{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, edges), InvalidArgument);
}

TEST(Graph, DegreeSumIsTwiceEdges) {
  auto planted = testing::sbm_fixture();
  std::int64_t total = 0;
  for (int d : planted.graph.degrees()) total += d;
  EXPECT_EQ(total, 2 * planted.graph.num_edges());
}

TEST(EdgeList, PlainWithComments) {
  TempDir dir("graph_plain");
  write_text(dir / "g.el", "# a comment\n% another\n0 1\n1 2 0.5\n\n2 3\n3 3\n");
  LoadedGraph loaded = load_edge_list(dir / "g.el");
  EXPECT_EQ(loaded.graph.num_nodes(), 4);
  EXPECT_EQ(loaded.graph.num_edges(), 3);
  EXPECT_EQ(loaded.dropped.self_loops, 1);
  EXPECT_FALSE(loaded.one_based);
}

TEST(EdgeList, OneBasedIdsShiftDown) {
  TempDir dir("graph_onebased");
  write_text(dir / "g.el", "1 2\n2 3\n");
  LoadedGraph loaded = load_edge_list(dir / "g.el");
  EXPECT_EQ(loaded.graph.num_nodes(), 3);
  EXPECT_EQ(loaded.original_ids, (std::vector<std::int64_t>{1, 2, 3}));
}

TEST(EdgeList, SparseIdsAreRemappedInOrder) {
  TempDir dir("graph_sparse");
  write_text(dir / "g.el", "100 7\n7 42\n");
  LoadedGraph loaded = load_edge_list(dir / "g.el");
  EXPECT_EQ(loaded.original_ids, (std::vector<std::int64_t>{7, 42, 100}));
  EXPECT_EQ(loaded.graph.degree(0), 2);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  TempDir dir("graph_bad");
  write_text(dir / "g.el", "0 1\n1 two\n");
  try {
    load_edge_list(dir / "g.el");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(EdgeList, EmptyFileIsAnError) {
  TempDir dir("graph_empty");
  write_text(dir / "g.el", "# nothing\n");
  EXPECT_THROW(load_edge_list(dir / "g.el"), ParseError);
}

TEST(EdgeList, MissingFileNamesPath) {
  try {
    load_edge_list("/nonexistent/graph.el");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/graph.el"), std::string::npos);
  }
}

TEST(EdgeList, RoundTripKeepsIsolatedNodes) {
  TempDir dir("graph_roundtrip");
  std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}};
  Graph g = Graph::from_edges(5, edges);
  write_edge_list(g, dir / "g.el");
  LoadedGraph back = load_edge_list(dir / "g.el");
  EXPECT_EQ(back.graph.num_nodes(), 5);
  EXPECT_EQ(std::vector(back.graph.edges().begin(), back.graph.edges().end()),
            std::vector(g.edges().begin(), g.edges().end()));
}

TEST(MatrixMarket, SymmetricPattern) {
  TempDir dir("graph_mm");
  write_text(dir / "g.mtx",
             "%%MatrixMarket matrix coordinate pattern symmetric\n"
             "% comment\n"
             "4 4 3\n"
             "2 1\n3 2\n4 3\n");
  LoadedGraph loaded = load_edge_list(dir / "g.mtx");
  EXPECT_EQ(loaded.graph.num_nodes(), 4);
  EXPECT_EQ(loaded.graph.degrees(), (std::vector<int>{1, 2, 2, 1}));
}

TEST(MatrixMarket, RejectsNonSquare) {
  TempDir dir("graph_mm_rect");
  write_text(dir / "g.mtx",
             "%%MatrixMarket matrix coordinate pattern general\n3 4 1\n1 2\n");
  EXPECT_THROW(load_edge_list(dir / "g.mtx", EdgeListFormat::kMatrixMarket), ParseError);
}

TEST(ExpandTreatment, CopiesClusterValue) {
  Clustering c({0, 0, 1, 1}, 2);
  std::vector<std::uint8_t> t{1, 0};
  EXPECT_EQ(expand_treatment(t, c), (UnitTreatment{1, 1, 0, 0}));
  std::vector<std::uint8_t> bad{1};
  EXPECT_THROW(expand_treatment(bad, c), InvalidArgument);
}

TEST(Sbm, DegenerateProbabilities) {
  std::vector<int> sizes{5, 5};
  auto empty = generate_sbm(sizes, 0.0, 0.0, 1);
  EXPECT_EQ(empty.graph.num_edges(), 0);
  auto full = generate_sbm(sizes, 1.0, 1.0, 1);
  EXPECT_EQ(full.graph.num_edges(), 45);
  EXPECT_EQ(full.blocks.num_clusters(), 2);
}

TEST(Sbm, SameSeedSameGraph) {
  auto a = testing::sbm_fixture(11);
  auto b = testing::sbm_fixture(11);
  EXPECT_EQ(std::vector(a.graph.edges().begin(), a.graph.edges().end()),
            std::vector(b.graph.edges().begin(), b.graph.edges().end()));
}

// Within and cross edge counts are Binomial(10 * C(20,2), 0.3) and
// Binomial(C(200,2) - 1900, 0.02); both must sit within three sd of the mean.
TEST(Sbm, EdgeCountsWithinBinomialBands) {
  auto planted = testing::sbm_fixture();
  std::int64_t within = 0;
  std::int64_t cross = 0;
  for (auto [u, v] : planted.graph.edges()) {
    (planted.blocks.cluster_of(u) == planted.blocks.cluster_of(v) ? within : cross)++;
  }
  EXPECT_NEAR(static_cast<double>(within), 570.0, 3 * 19.974984355438178);
  EXPECT_NEAR(static_cast<double>(cross), 360.0, 3 * 18.782971010998235);
}

TEST(Sbm, RejectsBadArguments) {
  std::vector<int> sizes{5, 0};
  EXPECT_THROW(generate_sbm(sizes, 0.5, 0.1, 1), InvalidArgument);
  std::vector<int> ok{5, 5};
  EXPECT_THROW(generate_sbm(ok, 0.1, 0.5, 1), InvalidArgument);
}

}  // namespace
}  // namespace covdesign
