#ifndef COVDESIGN_ANALYSIS_H_
#define COVDESIGN_ANALYSIS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "covdesign/clustering.h"
#include "covdesign/designs.h"
#include "covdesign/matrix.h"
#include "covdesign/outcomes.h"

namespace covdesign {

// Under the analysis model with known base levels, the adjusted HT estimate
// is (2/n) (h^T t + 2 gamma t^T C t) with h_k = sum_{i in S_k} (beta_i - gamma d_i).
std::vector<double> h_vector(const AnalysisModel& model, const Graph& graph,
                             const Clustering& clustering);

// E[tau_hat] - tau = (gamma / n) (4 trace(C Cov[t]) - sum_ij C_ij)
double bias_closed_form(const ClusterSummary& summary, const Matrix& cov, double gamma);

struct VarianceTerms {
  // Var[(2/n)(h^T t + 2 gamma t^T C t)] by summing over the design's support.
  double variance = 0.0;
  // h^T Cov[t] h, with Cov[t] from the design's closed form.
  double linear = 0.0;
  // Cov[h^T t, t^T C t]
  double cross = 0.0;
  // Var[t^T C t]
  double quadratic = 0.0;
  // (4/n^2)(linear + 4 gamma cross + 4 gamma^2 quadratic)
  double three_term_sum = 0.0;
};

// Throws InvalidArgument if the design has more than k_max clusters or cannot
// be enumerated.
VarianceTerms variance_exact(const ClusterSummary& summary, std::span<const double> h,
                             double gamma, const Design& design,
                             int k_max = kMaxEnumerationClusters);

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::int64_t draws = 0;
};

// Monte Carlo stand-in for variance_exact when enumeration is not possible.
McEstimate variance_monte_carlo(const ClusterSummary& summary, std::span<const double> h,
                                double gamma, const Design& design, std::int64_t draws,
                                std::uint64_t seed);

// Smallest omega with |h_k| <= omega gamma d_k for all k. Infinite when some
// d_k = 0 while h_k != 0. Throws InvalidArgument for gamma = 0.
double omega_from_model(const ClusterSummary& summary, std::span<const double> h,
                        double gamma);

// (8 gamma^2 (omega^2 + 4) / n^2) trace(d d^T (Cov[t] + 11^T / 4))
double variance_bound(const ClusterSummary& summary, const Matrix& cov, double gamma,
                      double omega);

// Scale-free MSE bound: the bound with the common gamma^2 / n^2 factor removed.
struct Objective {
  double bias_term = 0.0;      // (4 trace(C X) - S)^2
  double variance_term = 0.0;  // 8 (omega^2 + 4) trace(d d^T (X + 11^T / 4))
  double total() const { return bias_term + variance_term; }
};

Objective objective_f(const ClusterSummary& summary, const Matrix& cov, double omega);

}  // namespace covdesign

#endif  // COVDESIGN_ANALYSIS_H_
