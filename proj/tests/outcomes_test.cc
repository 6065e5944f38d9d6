#include "covdesign/outcomes.h"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.h"

namespace covdesign {
namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> v) {
  return std::vector<std::uint8_t>(v.begin(), v.end());
}

TEST(AnalysisModel, PathByHand) {
  Graph g = testing::path_graph();
  auto m = AnalysisModel::uniform(4, 0.0, 1.0, 1.0);
  EXPECT_EQ(eval_analysis(m, g, bits({1, 1, 0, 0})), (std::vector<double>{2, 2, 1, 0}));
}

TEST(AnalysisModel, ExtremeAssignments) {
  auto planted = testing::sbm_fixture();
  const Graph& g = planted.graph;
  const int n = g.num_nodes();
  AnalysisModel m;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < n; ++i) {
    m.alpha.push_back(u(gen));
    m.beta.push_back(u(gen));
  }
  m.gamma = 0.7;
  auto y0 = eval_analysis(m, g, std::vector<std::uint8_t>(n, 0));
  auto y1 = eval_analysis(m, g, std::vector<std::uint8_t>(n, 1));
  double diff = 0.0;
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ(y0[i], m.alpha[i]);
    EXPECT_NEAR(y1[i], m.alpha[i] + m.beta[i] + m.gamma * g.degree(i), 1e-12);
    diff += y1[i] - y0[i];
  }
  EXPECT_NEAR(gate_analysis(m, g), diff / n, 1e-12);
}

TEST(AnalysisModel, LinearInGamma) {
  auto planted = testing::sbm_fixture();
  const Graph& g = planted.graph;
  const int n = g.num_nodes();
  std::vector<std::uint8_t> z(n);
  for (int i = 0; i < n; ++i) z[i] = (i * 7 + 3) % 5 < 2;
  auto at = [&](double gamma) {
    return eval_analysis(AnalysisModel::uniform(n, 0.3, 1.1, gamma), g, z);
  };
  auto a = at(0.0), b = at(1.0), c = at(2.5);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(c[i] - a[i], 2.5 * (b[i] - a[i]), 1e-12);
}

TEST(AnalysisModel, Gates) {
  Graph g = testing::path_graph();
  EXPECT_DOUBLE_EQ(gate_analysis(AnalysisModel::uniform(4, 0, 1, 0), g), 1.0);
  EXPECT_DOUBLE_EQ(gate_analysis(AnalysisModel::uniform(4, 0, 1, 1), g), 2.5);
  EXPECT_DOUBLE_EQ(gate_analysis(AnalysisModel::uniform(4, 0, 0, 1), g), g.mean_degree());
}

TEST(SimModel, LinearPathByHand) {
  Graph g = testing::path_graph();
  SimModel m{SimModelKind::kLinear, 1.0, 1.0, 0.5, 0.0, 1.0};
  std::vector<double> noise(4, 0.0);
  auto y = eval_sim(m, g, bits({1, 0, 0, 0}), noise);
  EXPECT_NEAR(y[0], 2.3333333333333335, 1e-12);
  EXPECT_NEAR(y[1], 2.1666666666666665, 1e-12);
  EXPECT_NEAR(y[2], 1.6666666666666665, 1e-12);
  EXPECT_NEAR(y[3], 1.3333333333333333, 1e-12);
}

TEST(SimModel, LinearControlAndNoise) {
  Graph g = testing::path_graph();
  SimModel m{SimModelKind::kLinear, 1.0, 1.0, 0.5, 0.1, 2.0};
  std::vector<double> noise{1.0, -2.0, 0.0, 0.5};
  auto y = eval_sim(m, g, bits({0, 0, 0, 0}), noise);
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(y[i], 1.0 + 0.5 * g.degree(i) / 1.5 + 0.1 * noise[i], 1e-12);
}

TEST(SimModel, MultiplicativeFullTreatment) {
  Graph g = testing::path_graph();
  SimModel m{SimModelKind::kMultiplicative, 1.5, 1.0, 0.5, 0.0, 2.0};
  std::vector<double> noise(4, 0.3);
  auto y = eval_sim(m, g, bits({1, 1, 1, 1}), noise);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(y[i], 1.5 * g.degree(i) / 1.5 * 4.0, 1e-12);
}

TEST(SimModel, IsolatedNodes) {
  Graph g = Graph::from_edges(3, std::vector<std::pair<int, int>>{{0, 1}});
  std::vector<double> noise(3, 0.0);
  SimModel lin{SimModelKind::kLinear, 1.0, 1.0, 0.5, 0.0, 3.0};
  auto y = eval_sim(lin, g, bits({1, 1, 1}), noise);
  EXPECT_DOUBLE_EQ(y[2], 2.0);  // no interference term, r = 0
  SimModel mult{SimModelKind::kMultiplicative, 1.0, 1.0, 0.5, 0.0, 3.0};
  for (auto z : {bits({0, 0, 0}), bits({1, 0, 1}), bits({1, 1, 1})})
    EXPECT_EQ(eval_sim(mult, g, z, noise)[2], 0.0);
}

TEST(SimModel, PrecomputedExposureMatches) {
  auto planted = testing::sbm_fixture();
  const int n = planted.graph.num_nodes();
  std::vector<std::uint8_t> z(n);
  std::vector<double> noise(n);
  for (int i = 0; i < n; ++i) {
    z[i] = i % 3 == 0;
    noise[i] = 0.01 * (i % 17) - 0.08;
  }
  auto exposure = treated_neighbour_counts(planted.graph, z);
  SimModel m{SimModelKind::kMultiplicative, 1.0, 1.0, 0.5, 0.1, 1.0};
  EXPECT_EQ(eval_sim(m, planted.graph, z, noise), eval_sim(m, planted.graph, z, noise, exposure));
}

TEST(SimModel, Gates) {
  EXPECT_DOUBLE_EQ(gate_sim({SimModelKind::kLinear, 1.0, 1.0, 0.5, 0.1, 0.5}), 1.5);
  EXPECT_DOUBLE_EQ(gate_sim({SimModelKind::kMultiplicative, 1.0, 1.0, 0.5, 0.1, 2.0}), 3.0);
  EXPECT_DOUBLE_EQ(gate_sim({SimModelKind::kLinear, 1.0, 0.0, 0.5, 0.1, 0.0}), 0.0);
}

}  // namespace
}  // namespace covdesign
