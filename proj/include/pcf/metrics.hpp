#pragma once

#include <optional>
#include <string>

#include "pcf/recurrence.hpp"

namespace pcf {

inline constexpr long kMetricDepth = 2000;
inline constexpr double kRateThreshold = 0.05;

struct DeltaEstimate {
  double delta = 0;
  long depth = 0;
  ApproxValue limit_used;
  // False when the convergent hits the limit exactly or |q| <= 1; delta is then 0 and meaningless.
  bool defined = true;
  std::string note;
};

struct RateEstimate {
  double rate = 0;  // |raw|, or 0 below kRateThreshold
  double raw = 0;   // (1/depth) log|L - x_depth|, natural log
  long depth = 0;
};

struct Metrics {
  DeltaEstimate delta;
  RateEstimate rate;
};

// The limit is taken from evaluate_limit at twice the metric depth unless supplied.
DeltaEstimate irrationality_delta(const PCF& pcf, long depth = kMetricDepth);
RateEstimate convergence_rate(const PCF& pcf, long depth = kMetricDepth);
// Both metrics from one limit evaluation.
Metrics compute_metrics(const PCF& pcf, long depth = kMetricDepth);

// Smallest-denominator rational within relative tolerance of |rA|/|rB|.
// Returns 0 when either rate is 0 and std::nullopt when nothing fits.
std::optional<Q> rate_ratio(const RateEstimate& a, const RateEstimate& b, long den_cap = 12, double tol = 0.02);
std::optional<Q> rate_ratio(double ra, double rb, long den_cap = 12, double tol = 0.02);

}  // namespace pcf
