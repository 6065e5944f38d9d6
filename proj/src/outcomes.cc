#include "covdesign/outcomes.h"

#include <string>

#include "covdesign/error.h"

namespace covdesign {
namespace {

void check_length(std::size_t got, int n, const char* what) {
  if (static_cast<int>(got) != n) {
    throw InvalidArgument(std::string(what) + " has length " + std::to_string(got) +
                          ", expected " + std::to_string(n));
  }
}

}  // namespace

std::vector<double> treated_neighbour_counts(const Graph& graph,
                                             std::span<const std::uint8_t> z) {
  check_length(z.size(), graph.num_nodes(), "treatment vector");
  std::vector<double> counts(graph.num_nodes(), 0.0);
  for (int i = 0; i < graph.num_nodes(); ++i) {
    int s = 0;
    for (int j : graph.neighbors(i)) s += z[j];
    counts[i] = s;
  }
  return counts;
}

std::vector<double> eval_analysis(const AnalysisModel& model, const Graph& graph,
                                  std::span<const std::uint8_t> z) {
  return eval_analysis(model, graph, z, treated_neighbour_counts(graph, z));
}

std::vector<double> eval_analysis(const AnalysisModel& model, const Graph& graph,
                                  std::span<const std::uint8_t> z,
                                  std::span<const double> exposure) {
  const int n = graph.num_nodes();
  check_length(model.alpha.size(), n, "alpha");
  check_length(model.beta.size(), n, "beta");
  check_length(z.size(), n, "treatment vector");
  check_length(exposure.size(), n, "exposure");
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i)
    y[i] = model.alpha[i] + model.beta[i] * z[i] + model.gamma * exposure[i];
  return y;
}

std::vector<double> eval_sim(const SimModel& model, const Graph& graph,
                             std::span<const std::uint8_t> z,
                             std::span<const double> noise) {
  return eval_sim(model, graph, z, noise, treated_neighbour_counts(graph, z));
}

std::vector<double> eval_sim(const SimModel& model, const Graph& graph,
                             std::span<const std::uint8_t> z,
                             std::span<const double> noise,
                             std::span<const double> exposure) {
  const int n = graph.num_nodes();
  check_length(noise.size(), n, "noise");
  check_length(z.size(), n, "treatment vector");
  check_length(exposure.size(), n, "exposure");
  const double mean_degree = graph.mean_degree();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    const int d = graph.degree(i);
    const double share = d == 0 ? 0.0 : exposure[i] / d;
    const double relative_degree = mean_degree > 0.0 ? d / mean_degree : 0.0;
    if (model.kind == SimModelKind::kLinear) {
      y[i] = model.alpha + model.beta * z[i] + model.c * relative_degree +
             model.sigma * noise[i] + model.gamma * share;
    } else {
      y[i] = (model.alpha + model.sigma * noise[i]) * relative_degree *
             (1.0 + model.beta * z[i] + model.gamma * share);
    }
  }
  return y;
}

double gate_analysis(const AnalysisModel& model, const Graph& graph) {
  const int n = graph.num_nodes();
  check_length(model.beta.size(), n, "beta");
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += model.beta[i] + model.gamma * graph.degree(i);
  return s / n;
}

double gate_sim(const SimModel& model) {
  return model.kind == SimModelKind::kLinear ? model.beta + model.gamma
                                             : model.alpha * (model.beta + model.gamma);
}

}  // namespace covdesign
