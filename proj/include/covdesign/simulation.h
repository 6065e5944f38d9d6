#ifndef COVDESIGN_SIMULATION_H_
#define COVDESIGN_SIMULATION_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "covdesign/designs.h"
#include "covdesign/estimators.h"
#include "covdesign/graph.h"
#include "covdesign/outcomes.h"
#include "covdesign/partition.h"

namespace covdesign {

// Either one of the degree-normalised simulation models (its gamma field is
// overwritten from the grid) or the unnormalised analysis model.
using OutcomeModel = std::variant<SimModel, AnalysisModel>;

std::string model_name(const OutcomeModel& model);

struct SimConfig {
  std::vector<Design> designs;
  OutcomeModel model = SimModel{};
  std::vector<EstimatorKind> estimators{EstimatorKind::kHt};
  std::vector<double> gammas{0.5, 1.0, 2.0};
  std::int64_t replications = 10000;
  std::uint64_t seed = 0;
  // Reuse one noise draw per replication across designs instead of redrawing
  // per design.
  bool shared_noise = false;
  // 0 means std::thread::hardware_concurrency(). Results do not depend on it.
  int workers = 0;
};

struct CellStats {
  std::string design;
  double gamma = 0.0;
  EstimatorKind estimator = EstimatorKind::kHt;
  double tau = 0.0;  // oracle GATE
  double mean = 0.0;
  double bias = 0.0;
  double sd = 0.0;   // sample SD (n - 1 denominator); exact SD for exact runs
  double mse = 0.0;  // mean squared deviation from tau
  double se_bias = 0.0;
  double se_sd = 0.0;
  double se_mse = 0.0;
  std::int64_t used = 0;        // draws that entered the aggregates
  std::int64_t degenerate = 0;  // excluded draws (DIM with an empty arm)
  double degenerate_probability = 0.0;  // exact runs only
};

struct SimReport {
  std::string model;
  bool exact = false;
  bool shared_noise = false;
  std::int64_t replications = 0;  // 0 for exact runs
  std::vector<CellStats> cells;

  // Throws InvalidArgument if absent.
  const CellStats& cell(const std::string& design, double gamma,
                        EstimatorKind estimator) const;
};

// Base levels Y_i(0) without noise, used by the adjusted HT estimator:
// alpha_i for the analysis model, alpha + c d_i / mean_d (linear) or
// alpha d_i / mean_d (multiplicative).
std::vector<double> base_levels(const OutcomeModel& model, const Graph& graph);

// Monte Carlo over config.replications draws per design. Replication r of
// design j draws its treatment from stream (seed, 1, j, r) and its noise from
// (seed, 2, r, j), or (seed, 2, r) with shared noise. All gammas reuse the
// same draws.
SimReport run_mc(const Graph& graph, const Clustering& clustering, const SimConfig& config);

// Exact moments by summing over each design's support (K <= 16). Only the
// noise-free analysis model is accepted; `gammas` overrides model.gamma.
SimReport run_exact(const Graph& graph, const Clustering& clustering,
                    const std::vector<Design>& designs, const AnalysisModel& model,
                    const std::vector<EstimatorKind>& estimators,
                    const std::vector<double>& gammas);

// Designs x (gamma x {bias, sd, mse}) for one estimator, with the smallest
// MSE per gamma flagged.
struct ComparisonTable {
  EstimatorKind estimator = EstimatorKind::kHt;
  std::vector<std::string> designs;
  std::vector<double> gammas;
  // cells[design][gamma]
  std::vector<std::vector<CellStats>> cells;
  std::vector<int> best_design;  // per gamma, index into designs
};

ComparisonTable compare_designs(const SimReport& report, EstimatorKind estimator);
std::string to_csv(const ComparisonTable& table);
// Fixed-width text table in the bias / SD / MSE layout.
std::string to_text(const ComparisonTable& table);

// Sum with a fixed pairwise tree; reproducible for a given input order.
double pairwise_sum(std::span<const double> values);

}  // namespace covdesign

#endif  // COVDESIGN_SIMULATION_H_
