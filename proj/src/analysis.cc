#include "covdesign/analysis.h"

#include <cmath>
#include <limits>
#include <string>

#include "covdesign/error.h"

namespace covdesign {
namespace {

void check_square(const ClusterSummary& summary, const Matrix& cov) {
  const auto k = static_cast<std::size_t>(summary.num_clusters());
  if (cov.rows() != k || cov.cols() != k) {
    throw InvalidArgument("covariance is " + std::to_string(cov.rows()) + "x" +
                          std::to_string(cov.cols()) + " but summary has K=" +
                          std::to_string(k));
  }
}

void check_h(const ClusterSummary& summary, std::span<const double> h) {
  if (static_cast<int>(h.size()) != summary.num_clusters())
    throw InvalidArgument("h has length " + std::to_string(h.size()) + " but K=" +
                          std::to_string(summary.num_clusters()));
}

// t^T C t for a bitmask t.
double quadratic_form(const Matrix& c, std::uint32_t mask, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    if (!(mask >> i & 1u)) continue;
    for (int j = 0; j < k; ++j)
      if (mask >> j & 1u) s += c(i, j);
  }
  return s;
}

double linear_form(std::span<const double> h, std::uint32_t mask) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (mask >> i & 1u) s += h[i];
  return s;
}

double dd_trace(const ClusterSummary& summary, const Matrix& cov) {
  // trace(d d^T (X + 11^T/4)) = d^T X d + (sum d)^2 / 4
  double total = 0.0;
  for (double v : summary.degree) total += v;
  return bilinear(summary.degree, cov, summary.degree) + 0.25 * total * total;
}

}  // namespace

std::vector<double> h_vector(const AnalysisModel& model, const Graph& graph,
                             const Clustering& clustering) {
  if (clustering.num_units() != graph.num_nodes())
    throw InvalidArgument("clustering does not cover the graph");
  if (static_cast<int>(model.beta.size()) != graph.num_nodes())
    throw InvalidArgument("beta has wrong length");
  std::vector<double> h(clustering.num_clusters(), 0.0);
  for (int i = 0; i < graph.num_nodes(); ++i)
    h[clustering.cluster_of(i)] += model.beta[i] - model.gamma * graph.degree(i);
  return h;
}

double bias_closed_form(const ClusterSummary& summary, const Matrix& cov, double gamma) {
  check_square(summary, cov);
  return gamma / summary.num_units *
         (4.0 * trace_of_product(summary.contact, cov) - sum(summary.contact));
}

VarianceTerms variance_exact(const ClusterSummary& summary, std::span<const double> h,
                             double gamma, const Design& design, int k_max) {
  check_h(summary, h);
  const int k = summary.num_clusters();
  if (design.num_clusters() != k)
    throw InvalidArgument("design K does not match summary K");
  const std::vector<Outcome> law = design.enumerate(k_max);
  const double n = summary.num_units;

  struct Point {
    double p, lin, quad, est;
  };
  std::vector<Point> points;
  points.reserve(law.size());
  double mean_lin = 0.0;
  double mean_quad = 0.0;
  double mean_est = 0.0;
  for (const Outcome& o : law) {
    const double lin = linear_form(h, o.mask);
    const double quad = quadratic_form(summary.contact, o.mask, k);
    const double est = 2.0 / n * (lin + 2.0 * gamma * quad);
    points.push_back({o.probability, lin, quad, est});
    mean_lin += o.probability * lin;
    mean_quad += o.probability * quad;
    mean_est += o.probability * est;
  }
  VarianceTerms out;
  for (const Point& pt : points) {
    const double dl = pt.lin - mean_lin;
    const double dq = pt.quad - mean_quad;
    const double de = pt.est - mean_est;
    out.cross += pt.p * dl * dq;
    out.quadratic += pt.p * dq * dq;
    out.variance += pt.p * de * de;
  }
  out.linear = bilinear(h, design.covariance(), h);
  out.three_term_sum = 4.0 / (n * n) *
                       (out.linear + 4.0 * gamma * out.cross +
                        4.0 * gamma * gamma * out.quadratic);
  return out;
}

McEstimate variance_monte_carlo(const ClusterSummary& summary, std::span<const double> h,
                                double gamma, const Design& design, std::int64_t draws,
                                std::uint64_t seed) {
  check_h(summary, h);
  if (draws < 2) throw InvalidArgument("need at least two draws");
  const int k = summary.num_clusters();
  const double n = summary.num_units;
  Rng rng(derive_seed(seed, {0x7a4}));
  std::vector<double> values(draws);
  std::vector<double> tt(k);
  for (std::int64_t r = 0; r < draws; ++r) {
    const ClusterTreatment t = design.sample(rng);
    for (int i = 0; i < k; ++i) tt[i] = t[i];
    double lin = 0.0;
    for (int i = 0; i < k; ++i) lin += h[i] * tt[i];
    values[r] = 2.0 / n * (lin + 2.0 * gamma * bilinear(tt, summary.contact, tt));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(draws);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / static_cast<double>(draws - 1);
  m4 /= static_cast<double>(draws);
  const double central2 = m2 / static_cast<double>(draws);
  return {var, std::sqrt(std::max(0.0, m4 - central2 * central2) / static_cast<double>(draws)),
          draws};
}

double omega_from_model(const ClusterSummary& summary, std::span<const double> h,
                        double gamma) {
  check_h(summary, h);
  if (gamma == 0.0) throw InvalidArgument("omega is undefined for gamma = 0");
  double omega = 0.0;
  for (int k = 0; k < summary.num_clusters(); ++k) {
    if (h[k] == 0.0) continue;
    const double scale = std::abs(gamma) * summary.degree[k];
    if (scale == 0.0) return std::numeric_limits<double>::infinity();
    omega = std::max(omega, std::abs(h[k]) / scale);
  }
  return omega;
}

double variance_bound(const ClusterSummary& summary, const Matrix& cov, double gamma,
                      double omega) {
  check_square(summary, cov);
  if (omega < 0.0) throw InvalidArgument("omega must be non-negative");
  const double n = summary.num_units;
  return 8.0 * gamma * gamma * (omega * omega + 4.0) / (n * n) * dd_trace(summary, cov);
}

Objective objective_f(const ClusterSummary& summary, const Matrix& cov, double omega) {
  check_square(summary, cov);
  if (omega < 0.0) throw InvalidArgument("omega must be non-negative");
  const double gap = 4.0 * trace_of_product(summary.contact, cov) - summary.total;
  return {gap * gap, 8.0 * (omega * omega + 4.0) * dd_trace(summary, cov)};
}

}  // namespace covdesign
