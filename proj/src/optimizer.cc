#include "covdesign/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "covdesign/kernels.h"
#include "covdesign/rng.h"

namespace covdesign {
namespace {

TracePoint describe(const ClusterSummary& summary, const Matrix& root, double omega,
                    int iteration, std::int64_t clamped) {
  const Matrix x = covariance_from_root(root);
  const Objective f = objective_f(summary, x, omega);
  TracePoint p;
  p.iteration = iteration;
  p.objective = f.total();
  p.bias_term = f.bias_term;
  p.variance_term = f.variance_term;
  p.max_row_norm_error = max_row_norm_error(root);
  p.min_offdiag = x.rows() > 1 ? 1.0 : 0.0;
  p.max_offdiag = x.rows() > 1 ? -1.0 : 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    p.max_diag_error = std::max(p.max_diag_error, std::abs(x(i, i) - 0.25));
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (i == j) continue;
      p.min_offdiag = std::min(p.min_offdiag, x(i, j));
      p.max_offdiag = std::max(p.max_offdiag, x(i, j));
    }
  }
  p.clamped = clamped;
  return p;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Objective objective_at_root(const ClusterSummary& summary, const Matrix& root,
                            double omega) {
  return objective_f(summary, covariance_from_root(root), omega);
}

RootGradient gradient_f(const Matrix& root, const ClusterSummary& summary, double omega,
                        double clamp) {
  const std::size_t k = root.rows();
  if (!root.square() || static_cast<int>(k) != summary.num_clusters())
    throw InvalidArgument("root must be K x K with K matching the summary");
  const Matrix gram = multiply_abt(root, root);
  const Matrix x = covariance_from_root(root);
  const double gap = 4.0 * trace_of_product(summary.contact, x) - summary.total;
  const double bias_scale = 8.0 * gap;
  const double variance_scale = 8.0 * (omega * omega + 4.0);
  const double hi = 1.0 - clamp;

  RootGradient out;
  Matrix weighted(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      double a = gram(i, j);
      if (a > hi || a < -hi) {
        a = std::clamp(a, -hi, hi);
        ++out.clamped;
      }
      const double g_x = bias_scale * summary.contact(i, j) +
                         variance_scale * summary.degree[i] * summary.degree[j];
      weighted(i, j) = g_x / (2.0 * std::numbers::pi * std::sqrt(1.0 - a * a));
    }
  }
  out.gradient = multiply(weighted, root);
  for (double& v : out.gradient.flat()) v *= 2.0;
  if (!all_finite(out.gradient.flat()))
    throw InvalidArgument("gradient has non-finite entries");
  return out;
}

OptimizeResult optimize(const ClusterSummary& summary, const OptimizerConfig& config,
                        const Matrix* start) {
  const int k = summary.num_clusters();
  if (k < 1) throw InvalidArgument("optimize needs K >= 1");
  if (config.iterations < 0 || config.trace_stride < 1 || !(config.step > 0.0) ||
      !(config.clamp > 0.0) || config.omega < 0.0 || !(config.beta1 > 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 > 0.0 && config.beta2 < 1.0) || !(config.moment_eps > 0.0))
    throw InvalidArgument("invalid optimizer configuration");

  Matrix root;
  if (start != nullptr) {
    if (static_cast<int>(start->rows()) != k || static_cast<int>(start->cols()) != k) {
      throw InvalidArgument("start matrix is " + std::to_string(start->rows()) + "x" +
                            std::to_string(start->cols()) + " but the clustering has K=" +
                            std::to_string(k));
    }
    root = project_rows(*start);
  } else {
    root = Matrix::identity(k);
    if (config.init_jitter > 0.0) {
      Rng rng(derive_seed(config.seed, {0x1417}));
      for (double& v : root.flat()) v += config.init_jitter * rng.normal();
      root = project_rows(root);
    }
  }

  OptimizeResult result;
  result.trace.push_back(describe(summary, root, config.omega, 0, 0));
  result.initial_objective = result.trace.back().objective;
  if (!std::isfinite(result.initial_objective))
    throw OptimizationError("initial objective is not finite", result.trace);

  const std::size_t count = static_cast<std::size_t>(k) * k;
  std::vector<double> m(count, 0.0);
  std::vector<double> v(count, 0.0);
  const auto& kern = kernels::active();
  double b1_power = 1.0;
  double b2_power = 1.0;
  std::int64_t last_clamped = 0;
  for (int it = 1; it <= config.iterations; ++it) {
    RootGradient g;
    try {
      g = gradient_f(root, summary, config.omega, config.clamp);
    } catch (const InvalidArgument& e) {
      throw OptimizationError(std::string(e.what()) + " at iteration " + std::to_string(it),
                              result.trace);
    }
    last_clamped = g.clamped;
    result.clamped_total += g.clamped;
    b1_power *= config.beta1;
    b2_power *= config.beta2;
    const kernels::AdamCoeffs coeffs{config.step,     config.beta1,    config.beta2,
                                     config.moment_eps, 1.0 - b1_power, 1.0 - b2_power};
    kern.adam_update(root.data(), m.data(), v.data(), g.gradient.data(), count, coeffs);
    root = project_rows(root);
    if (it % config.trace_stride == 0 || it == config.iterations) {
      result.trace.push_back(describe(summary, root, config.omega, it, last_clamped));
      if (!std::isfinite(result.trace.back().objective))
        throw OptimizationError("objective became non-finite at iteration " +
                                    std::to_string(it),
                                result.trace);
    }
  }
  result.final_objective = result.trace.back().objective;
  result.root = std::move(root);
  return result;
}

}  // namespace covdesign
