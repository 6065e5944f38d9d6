#ifndef COVDESIGN_OUTCOMES_H_
#define COVDESIGN_OUTCOMES_H_

#include <span>
#include <vector>

#include "covdesign/graph.h"

namespace covdesign {

// Y_i(z) = alpha_i + beta_i z_i + gamma * sum_{j in N_i} z_j
struct AnalysisModel {
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0.0;

  static AnalysisModel uniform(int n, double alpha, double beta, double gamma) {
    return {std::vector<double>(n, alpha), std::vector<double>(n, beta), gamma};
  }
};

enum class SimModelKind { kLinear, kMultiplicative };

// Degree-normalised simulation models. With f_i the treated share of i's
// neighbours (0 for isolated nodes) and r_i = d_i / mean degree:
//   linear:          Y_i = alpha + beta z_i + c r_i + sigma eps_i + gamma f_i
//   multiplicative:  Y_i = (alpha + sigma eps_i) r_i (1 + beta z_i + gamma f_i)
struct SimModel {
  SimModelKind kind = SimModelKind::kLinear;
  double alpha = 1.0;
  double beta = 1.0;
  double c = 0.5;
  double sigma = 0.1;
  double gamma = 0.0;
};

// Number of treated neighbours of each unit.
std::vector<double> treated_neighbour_counts(const Graph& graph,
                                             std::span<const std::uint8_t> z);

std::vector<double> eval_analysis(const AnalysisModel& model, const Graph& graph,
                                  std::span<const std::uint8_t> z);

// `noise` holds one standard normal draw per unit.
std::vector<double> eval_sim(const SimModel& model, const Graph& graph,
                             std::span<const std::uint8_t> z,
                             std::span<const double> noise);

// Variants taking precomputed treated-neighbour counts, for callers that
// evaluate several models on the same assignment.
std::vector<double> eval_analysis(const AnalysisModel& model, const Graph& graph,
                                  std::span<const std::uint8_t> z,
                                  std::span<const double> exposure);
std::vector<double> eval_sim(const SimModel& model, const Graph& graph,
                             std::span<const std::uint8_t> z,
                             std::span<const double> noise,
                             std::span<const double> exposure);

// (1/n) sum_i (beta_i + gamma d_i)
double gate_analysis(const AnalysisModel& model, const Graph& graph);
// beta + gamma (linear) or alpha (beta + gamma) (multiplicative).
double gate_sim(const SimModel& model);

}  // namespace covdesign

#endif  // COVDESIGN_OUTCOMES_H_
