#ifndef COVDESIGN_OPTIMIZER_H_
#define COVDESIGN_OPTIMIZER_H_

#include <cstdint>
#include <vector>

#include "covdesign/analysis.h"
#include "covdesign/clustering.h"
#include "covdesign/correlation_root.h"
#include "covdesign/error.h"
#include "covdesign/matrix.h"

namespace covdesign {

struct OptimizerConfig {
  int iterations = 2000;
  double step = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double moment_eps = 1e-8;
  // Off-diagonal Gram entries are clamped to [-1 + clamp, 1 - clamp] when
  // evaluating the arcsin derivative.
  double clamp = 1e-6;
  double omega = 1.0;
  std::uint64_t seed = 0;
  // Standard deviation of Gaussian noise added to the identity start before
  // projection. Zero starts from the independent design.
  double init_jitter = 0.0;
  int trace_stride = 10;
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
  double bias_term = 0.0;
  double variance_term = 0.0;
  double max_row_norm_error = 0.0;
  double min_offdiag = 0.0;  // smallest off-diagonal entry of X(R)
  double max_offdiag = 0.0;
  double max_diag_error = 0.0;  // max |X_kk - 1/4|
  std::int64_t clamped = 0;     // clamped Gram entries in the last gradient
};

struct OptimizeResult {
  Matrix root;
  std::vector<TracePoint> trace;  // last entry describes `root`
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::int64_t clamped_total = 0;
  bool improved() const { return final_objective <= initial_objective; }
};

class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, std::vector<TracePoint> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<TracePoint>& trace() const { return trace_; }

 private:
  std::vector<TracePoint> trace_;
};

// objective_f at X(R).
Objective objective_at_root(const ClusterSummary& summary, const Matrix& root, double omega);

struct RootGradient {
  Matrix gradient;
  std::int64_t clamped = 0;
};

// d f(X(R)) / dR with the diagonal of X held at 1/4:
//   G_X = 8 (4 trace(C X) - S) C + 8 (omega^2 + 4) d d^T
//   G_A = G_X .* D,  D_ij = 1 / (2 pi sqrt(1 - A_ij^2)) off the diagonal, 0 on it
//   grad = 2 G_A R
RootGradient gradient_f(const Matrix& root, const ClusterSummary& summary, double omega,
                        double clamp);

// Projected Adam descent on R from R0 (identity unless `start` is given).
// Throws OptimizationError on a non-finite objective or gradient.
OptimizeResult optimize(const ClusterSummary& summary, const OptimizerConfig& config,
                        const Matrix* start = nullptr);

}  // namespace covdesign

#endif  // COVDESIGN_OPTIMIZER_H_
