#pragma once

// Brute-force reference solvers. They avoid the Newton machinery entirely
// and are meant for cross-checking minimize() on small problems.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stefan/energy.hpp"
#include "stefan/problem.hpp"
#include "stefan/stefan_conditions.hpp"

namespace stefan {

/// Root of the single Stefan condition of a one-front problem by bisection
/// on [lo, hi]. The condition must change sign over the bracket, and the
/// bracket should keep |xi/a_i| small enough (below about 35) that the plain
/// F differences do not underflow.
inline double oracle_bisection_n1(const ProblemSpec& spec, double lo, double hi, double tol = 1e-12) {
  if (spec.transitions() != 1)
    throw std::invalid_argument("oracle_bisection_n1: problem must have exactly one transition");
  if (!(lo < hi))
    throw std::invalid_argument("oracle_bisection_n1: bracket must satisfy lo < hi");
  const auto residual = [&](double x) { return stefan_condition(spec, FreeBoundaries({x}), 1); };

  double f_lo = residual(lo);
  const double f_hi = residual(hi);
  if (f_lo == 0.0)
    return lo;
  if (f_hi == 0.0)
    return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0))
    throw std::domain_error("oracle_bisection_n1: no sign change in bracket");

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double f_mid = residual(mid);
    if (f_mid == 0.0)
      return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct GridSearchResult {
  FreeBoundaries point;
  double energy = 0.0;
  bool on_boundary = false;  // minimizer sits on the edge of the box
};

/// Exhaustive search over the strictly increasing tuples of a tensor grid.
/// box[i] = (low, high) for coordinate i; ties go to the lexicographically
/// first tuple.
inline GridSearchResult oracle_gridsearch(const ProblemSpec& spec, const std::vector<std::pair<double, double>>& box,
                                          std::size_t points_per_axis) {
  const std::size_t n = spec.transitions();
  if (box.size() != n)
    throw std::invalid_argument("oracle_gridsearch: box dimension does not match the problem");
  if (points_per_axis < 2)
    throw std::invalid_argument("oracle_gridsearch: need at least two points per axis");

  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [low, high] = box[i];
    if (!(low < high))
      throw std::invalid_argument("oracle_gridsearch: empty box side");
    axes[i].resize(points_per_axis);
    for (std::size_t j = 0; j < points_per_axis; ++j)
      axes[i][j] = low + (high - low) * static_cast<double>(j) / static_cast<double>(points_per_axis - 1);
    axes[i].back() = high;
  }

  std::vector<std::size_t> index(n, 0);
  std::vector<double> point(n);
  std::vector<std::size_t> best_index;
  double best = std::numeric_limits<double>::infinity();

  // Odometer over all index tuples; infeasible tuples are skipped.
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      point[i] = axes[i][index[i]];
    if (FreeBoundaries::feasible(point)) {
      const double e = energy(spec, point);
      if (e < best) {
        best = e;
        best_index = index;
      }
    }
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++index[pos] < points_per_axis)
        break;
      index[pos] = 0;
      if (pos == 0) {
        pos = n + 1;
        break;
      }
    }
    if (pos == n + 1)
      break;
  }

  if (best_index.empty())
    throw std::domain_error("oracle_gridsearch: no strictly increasing grid point in the box");

  GridSearchResult result;
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) {
    xi[i] = axes[i][best_index[i]];
    result.on_boundary = result.on_boundary || best_index[i] == 0 || best_index[i] + 1 == points_per_axis;
  }
  result.point = FreeBoundaries(std::move(xi));
  result.energy = best;
  return result;
}

}  // namespace stefan
