#ifndef COVDESIGN_ESTIMATORS_H_
#define COVDESIGN_ESTIMATORS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace covdesign {

enum class EstimatorKind { kHt, kHtAdjusted, kDim };

std::string_view estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator(std::string_view name);

struct EstimateRecord {
  double value = 0.0;
  EstimatorKind kind = EstimatorKind::kHt;
  // Set when the estimate is undefined (DIM with an empty arm).
  bool degenerate = false;
};

// Horvitz-Thompson with marginal treatment probability 1/2:
// (2/n) sum_i (2 z_i - 1) Y_i.
EstimateRecord ht(std::span<const std::uint8_t> z, std::span<const double> y);
// ht(z, Y - alpha), for known base levels.
EstimateRecord ht_adjusted(std::span<const std::uint8_t> z, std::span<const double> y,
                           std::span<const double> alpha);
// Treated mean minus control mean.
EstimateRecord dim(std::span<const std::uint8_t> z, std::span<const double> y);

}  // namespace covdesign

#endif  // COVDESIGN_ESTIMATORS_H_
