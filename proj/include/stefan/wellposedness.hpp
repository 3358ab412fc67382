#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stefan/problem.hpp"

namespace stefan {

/// Exact coercivity and convexity criteria of a problem.
///
/// upper_sums[j-1] = S^j = sum_{i=1}^{j} [kappa_{i-1}(u_i - u_{i-1}) + d_i]
/// lower_sums[j-1] = S_j = sum_{i=j}^{n} [kappa_i(u_{i+1} - u_i) + d_i]
/// convexity_margins[i-1] = min(kappa_i(u_{i+1}-u_i), kappa_{i-1}(u_i-u_{i-1})) + 2 d_i
///
/// The energy is coercive (a minimizer exists) iff every S^j and S_j is
/// nonnegative; it is strictly convex (the minimizer is unique) when every
/// margin is nonnegative. Comparisons are exact; values within
/// borderline_band of zero are listed in warnings.
struct WellPosednessReport {
  std::vector<double> upper_sums;
  std::vector<double> lower_sums;
  bool coercive = false;
  std::vector<double> convexity_margins;
  bool strictly_convex_sufficient = false;
  std::vector<std::string> warnings;

  static constexpr double borderline_band = 1e-12;
};

inline WellPosednessReport check_wellposedness(const ProblemSpec& spec) {
  const std::size_t n = spec.transitions();
  WellPosednessReport report;
  report.upper_sums.resize(n);
  report.lower_sums.resize(n);
  report.convexity_margins.resize(n);

  double running = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    running += spec.kappa_rise(j - 1) + spec.d(j);
    report.upper_sums[j - 1] = running;
  }
  running = 0.0;
  for (std::size_t j = n; j >= 1; --j) {
    running += spec.kappa_rise(j) + spec.d(j);
    report.lower_sums[j - 1] = running;
  }
  for (std::size_t i = 1; i <= n; ++i)
    report.convexity_margins[i - 1] = std::min(spec.kappa_rise(i), spec.kappa_rise(i - 1)) + 2.0 * spec.d(i);

  const auto nonnegative = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double s) { return s >= 0.0; });
  };
  report.coercive = nonnegative(report.upper_sums) && nonnegative(report.lower_sums);
  report.strictly_convex_sufficient = nonnegative(report.convexity_margins);

  const auto flag = [&](const std::vector<double>& values, const char* name) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (std::abs(values[j]) <= WellPosednessReport::borderline_band)
        report.warnings.push_back(std::string(name) + "[" + std::to_string(j + 1) +
                                  "] is within 1e-12 of zero; verdict is borderline");
    }
  };
  flag(report.upper_sums, "S_upper");
  flag(report.lower_sums, "S_lower");
  flag(report.convexity_margins, "convexity_margin");
  return report;
}

}  // namespace stefan
