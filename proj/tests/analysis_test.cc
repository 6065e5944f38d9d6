#include "covdesign/analysis.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "covdesign/error.h"
#include "covdesign/estimators.h"
#include "fixtures.h"

namespace covdesign {
namespace {

// Moments of the adjusted HT estimate computed unit by unit over the design's
// support, without going through the cluster summary.
struct UnitMoments {
  double mean = 0.0;
  double variance = 0.0;
  double tau = 0.0;
};

UnitMoments unit_moments(const Graph& g, const Clustering& c, const AnalysisModel& m,
                         const Design& d) {
  UnitMoments out;
  std::vector<std::pair<double, double>> values;
  for (const Outcome& o : d.enumerate()) {
    UnitTreatment z = expand_treatment(mask_to_treatment(o.mask, d.num_clusters()), c);
    auto y = eval_analysis(m, g, z);
    values.emplace_back(o.probability, ht_adjusted(z, y, m.alpha).value);
  }
  for (auto [p, v] : values) out.mean += p * v;
  for (auto [p, v] : values) out.variance += p * (v - out.mean) * (v - out.mean);
  out.tau = gate_analysis(m, g);
  return out;
}

AnalysisModel random_model(int n, double gamma, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  AnalysisModel m;
  for (int i = 0; i < n; ++i) {
    m.alpha.push_back(normal(gen));
    m.beta.push_back(1.0 + 0.5 * normal(gen));
  }
  m.gamma = gamma;
  return m;
}

TEST(Bias, PathIndependent) {
  ClusterSummary s = build_cluster_summary(testing::path_graph(), testing::halves(4));
  EXPECT_DOUBLE_EQ(bias_closed_form(s, Matrix::identity(2) * 0.25, 1.0), -0.5);
  EXPECT_DOUBLE_EQ(bias_closed_form(s, Matrix(2, 2, 0.25), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(bias_closed_form(s, Design::complete(2).covariance(), 1.0), -1.0);
  EXPECT_THROW(bias_closed_form(s, Matrix::identity(3), 1.0), InvalidArgument);
}

TEST(Bias, SingleClusterIsUnbiased) {
  auto planted = testing::sbm_fixture();
  ClusterSummary s = build_cluster_summary(planted.graph, testing::one_cluster(200));
  EXPECT_EQ(bias_closed_form(s, Matrix(1, 1, 0.25), 2.0), 0.0);
}

TEST(Variance, SingleClusterPath) {
  Graph g = testing::path_graph();
  Clustering c = testing::one_cluster(4);
  ClusterSummary s = build_cluster_summary(g, c);
  auto model = AnalysisModel::uniform(4, 0.0, 1.0, 1.0);
  auto h = h_vector(model, g, c);
  ASSERT_EQ(h, (std::vector<double>{-2.0}));
  VarianceTerms v = variance_exact(s, h, 1.0, Design::bernoulli(1));
  EXPECT_NEAR(v.variance, 6.25, 1e-14);
  EXPECT_NEAR(v.three_term_sum, 6.25, 1e-14);
  EXPECT_NEAR(omega_from_model(s, h, 1.0), 1.0 / 3, 1e-15);
  EXPECT_NEAR(variance_bound(s, Matrix(1, 1, 0.25), 1.0, 1.0), 45.0, 1e-12);
  Objective f = objective_f(s, Matrix(1, 1, 0.25), 1.0);
  EXPECT_EQ(f.bias_term, 0.0);
  EXPECT_NEAR(f.total(), 720.0, 1e-12);
}

TEST(Variance, PathTwoClustersBernoulli) {
  Graph g = testing::path_graph();
  Clustering c = testing::halves(4);
  ClusterSummary s = build_cluster_summary(g, c);
  auto model = AnalysisModel::uniform(4, 0.0, 1.0, 1.0);
  auto h = h_vector(model, g, c);
  VarianceTerms v = variance_exact(s, h, 1.0, Design::bernoulli(2));
  EXPECT_NEAR(v.variance, 3.375, 1e-14);
  EXPECT_NEAR(v.three_term_sum, 3.375, 1e-14);
  EXPECT_NEAR(variance_exact(s, h, 1.0, Design::complete(2)).variance, 0.0, 1e-14);
}

TEST(Variance, ZeroGammaLeavesLinearTerm) {
  auto planted = testing::small_sbm(4, 5, 3);
  ClusterSummary s = build_cluster_summary(planted.graph, planted.blocks);
  auto model = random_model(20, 0.0, 4);
  auto h = h_vector(model, planted.graph, planted.blocks);
  Design d = Design::complete(4);
  VarianceTerms v = variance_exact(s, h, 0.0, d);
  EXPECT_NEAR(v.variance, 4.0 / 400 * bilinear(h, d.covariance(), h), 1e-12);
}

TEST(Variance, MonteCarloAgreesWithEnumeration) {
  Graph g = testing::path_graph();
  Clustering c = testing::halves(4);
  ClusterSummary s = build_cluster_summary(g, c);
  auto h = h_vector(AnalysisModel::uniform(4, 0.0, 1.0, 1.0), g, c);
  McEstimate mc = variance_monte_carlo(s, h, 1.0, Design::bernoulli(2), 1'000'000, 5);
  EXPECT_EQ(mc.draws, 1'000'000);
  EXPECT_NEAR(mc.value, 3.375, 3 * mc.standard_error);
}

TEST(Variance, RefusesLargeOrGenericDesigns) {
  auto planted = testing::small_sbm(4, 5, 3);
  ClusterSummary s = build_cluster_summary(planted.graph, planted.blocks);
  std::vector<double> h(4, 1.0);
  EXPECT_THROW(variance_exact(s, h, 1.0, Design::bernoulli(4), 3), InvalidArgument);
  EXPECT_THROW(variance_exact(s, h, 1.0, Design::ocd(testing::random_root(4, 9))),
               InvalidArgument);
}

TEST(Omega, Cases) {
  Graph g = testing::path_graph();
  Clustering c = testing::halves(4);
  ClusterSummary s = build_cluster_summary(g, c);
  AnalysisModel balanced{std::vector<double>(4, 0.0), {1, 2, 2, 1}, 1.0};
  auto h0 = h_vector(balanced, g, c);
  EXPECT_EQ(h0, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(omega_from_model(s, h0, 1.0), 0.0);
  EXPECT_THROW(omega_from_model(s, h0, 0.0), InvalidArgument);

  Graph lonely = Graph::from_edges(3, std::vector<std::pair<int, int>>{{0, 1}});
  Clustering lc({0, 0, 1}, 2);
  ClusterSummary ls = build_cluster_summary(lonely, lc);
  auto h = h_vector(AnalysisModel::uniform(3, 0, 1, 1), lonely, lc);
  EXPECT_TRUE(std::isinf(omega_from_model(ls, h, 1.0)));
}

TEST(Bound, MonotoneInCorrelation) {
  ClusterSummary s = build_cluster_summary(testing::path_graph(), testing::halves(4));
  double independent = variance_bound(s, Matrix::identity(2) * 0.25, 1.0, 1.0);
  double correlated = variance_bound(s, Matrix(2, 2, 0.25), 1.0, 1.0);
  EXPECT_GT(correlated, independent);
  EXPECT_EQ(variance_bound(s, Matrix(2, 2, 0.25), 0.0, 1.0), 0.0);
  EXPECT_THROW(variance_bound(s, Matrix(2, 2, 0.25), 1.0, -1.0), InvalidArgument);
}

TEST(Objective, PathIndependentDesign) {
  ClusterSummary s = build_cluster_summary(testing::path_graph(), testing::halves(4));
  Objective f = objective_f(s, Matrix::identity(2) * 0.25, 1.0);
  EXPECT_NEAR(f.bias_term, 4.0, 1e-13);
  EXPECT_NEAR(f.variance_term, 540.0, 1e-12);
  EXPECT_NEAR(f.total(), 544.0, 1e-12);
  EXPECT_EQ(objective_f(s, Matrix(2, 2, 0.25), 3.0).bias_term, 0.0);
}

TEST(Objective, RestoresBoundWithScale) {
  auto planted = testing::sbm_fixture();
  ClusterSummary s = build_cluster_summary(planted.graph, planted.blocks);
  Matrix x = Design::ocd(testing::random_root(10, 4)).covariance();
  const double n = 200.0;
  for (double gamma : {0.5, 2.0}) {
    for (double omega : {0.3, 1.0}) {
      double b = bias_closed_form(s, x, gamma);
      double lhs = gamma * gamma / (n * n) * objective_f(s, x, omega).total();
      double rhs = b * b + variance_bound(s, x, gamma, omega);
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, rhs));
    }
  }
}

// Closed-form bias and the three-term variance against unit-level enumeration
// on heterogeneous models.
class Oracle : public ::testing::TestWithParam<int> {};

TEST_P(Oracle, BiasVarianceAndBound) {
  const int seed = GetParam();
  auto planted = testing::small_sbm(4 + seed % 3 * 2, 4, seed);
  const Graph& g = planted.graph;
  const Clustering& c = planted.blocks;
  const int k = c.num_clusters();
  ClusterSummary s = build_cluster_summary(g, c);
  std::vector<Design> designs{Design::bernoulli(k), Design::complete(k),
                              Design::ibr(build_ibr_blocks(c.sizes(), 2), k, 2)};
  Matrix planar(k, k);
  for (int a = 0; a < k; ++a) {
    planar(a, 0) = std::cos(0.9 * a + seed);
    planar(a, 1) = std::sin(0.9 * a + seed);
  }
  designs.push_back(Design::ocd(planar));
  for (double gamma : {0.5, 2.0}) {
    AnalysisModel model = random_model(g.num_nodes(), gamma, 100 + seed);
    auto h = h_vector(model, g, c);
    const double omega = omega_from_model(s, h, gamma);
    for (const Design& d : designs) {
      UnitMoments u = unit_moments(g, c, model, d);
      const double bias = u.mean - u.tau;
      EXPECT_NEAR(bias, bias_closed_form(s, d.covariance(), gamma), 1e-10) << d.name();
      VarianceTerms v = variance_exact(s, h, gamma, d);
      EXPECT_NEAR(v.variance, u.variance, 1e-10) << d.name();
      EXPECT_NEAR(v.three_term_sum, u.variance, 1e-10) << d.name();
      const double bound = variance_bound(s, d.covariance(), gamma, omega);
      EXPECT_GE(bound + 1e-12, u.variance) << d.name();
      EXPECT_GE(bias * bias + bound + 1e-12, bias * bias + u.variance) << d.name();
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallSbm, Oracle, ::testing::Range(1, 7));

}  // namespace
}  // namespace covdesign
