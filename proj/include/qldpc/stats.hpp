#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace qldpc {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.576;

/// Half-width of the Wald interval z * sqrt(p (1 - p) / trials).
inline double wald_halfwidth(std::size_t failures, std::size_t trials, double z = kZ99) {
  if (trials == 0) return 0.0;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  return z * std::sqrt(p * (1.0 - p) / n);
}

/// Wilson score interval (lower, upper).
inline std::pair<double, double> wilson_interval(std::size_t failures, std::size_t trials,
                                                 double z = kZ99) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Monte Carlo failure estimate at one physical error rate.
struct EstimateWithCI {
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double p_log = 0.0;
  double ci99 = 0.0;  // Wald half-width
};

inline EstimateWithCI make_estimate(double p, std::size_t failures, std::size_t trials) {
  EstimateWithCI e;
  e.p = p;
  e.trials = trials;
  e.failures = failures;
  e.p_log = trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
  e.ci99 = wald_halfwidth(failures, trials);
  return e;
}

}  // namespace qldpc
