#include "covdesign/estimators.h"

#include <limits>
#include <string>
#include <vector>

#include "covdesign/error.h"
#include "covdesign/kernels.h"

namespace covdesign {
namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b)
    throw InvalidArgument("treatment and outcome lengths differ (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kHt:
      return "ht";
    case EstimatorKind::kHtAdjusted:
      return "ht_adjusted";
    case EstimatorKind::kDim:
      return "dim";
  }
  return "?";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  if (name == "ht") return EstimatorKind::kHt;
  if (name == "ht_adjusted") return EstimatorKind::kHtAdjusted;
  if (name == "dim") return EstimatorKind::kDim;
  return std::nullopt;
}

EstimateRecord ht(std::span<const std::uint8_t> z, std::span<const double> y) {
  check_sizes(z.size(), y.size());
  if (z.empty()) throw InvalidArgument("ht: empty population");
  const double s = kernels::active().signed_sum(z.data(), y.data(), z.size());
  return {2.0 * s / static_cast<double>(z.size()), EstimatorKind::kHt, false};
}

EstimateRecord ht_adjusted(std::span<const std::uint8_t> z, std::span<const double> y,
                           std::span<const double> alpha) {
  check_sizes(y.size(), alpha.size());
  std::vector<double> shifted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) shifted[i] = y[i] - alpha[i];
  EstimateRecord r = ht(z, shifted);
  r.kind = EstimatorKind::kHtAdjusted;
  return r;
}

EstimateRecord dim(std::span<const std::uint8_t> z, std::span<const double> y) {
  check_sizes(z.size(), y.size());
  double treated = 0.0;
  double control = 0.0;
  std::size_t nt = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i]) {
      treated += y[i];
      ++nt;
    } else {
      control += y[i];
    }
  }
  const std::size_t nc = z.size() - nt;
  if (nt == 0 || nc == 0)
    return {std::numeric_limits<double>::quiet_NaN(), EstimatorKind::kDim, true};
  return {treated / nt - control / nc, EstimatorKind::kDim, false};
}

}  // namespace covdesign
