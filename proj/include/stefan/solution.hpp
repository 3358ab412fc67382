#pragma once

// Piecewise self-similar temperature profile
//
//   v(xi) = u_i + (u_{i+1}-u_i) (F(xi/a_i) - F(xi_i/a_i)) / (F(xi_{i+1}/a_i) - F(xi_i/a_i)),
//   xi_i < xi < xi_{i+1},
//
// and u(t, x) = v(x / sqrt(t)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stefan/kernel.hpp"
#include "stefan/problem.hpp"
#include "stefan/stefan_conditions.hpp"

namespace stefan {

/// Coefficients of phase i: v = offset + scale (F(xi/a_i) - F(xi_i/a_i)).
struct PieceCoefficients {
  double offset = 0.0;     // u_i
  double scale = 0.0;      // (u_{i+1}-u_i) / (F(x_i) - F(y_i))
  double log_gap = 0.0;    // ln(F(x_i) - F(y_i))
};

class SelfSimilarSolution {
 public:
  SelfSimilarSolution(ProblemSpec spec, FreeBoundaries fronts) : spec_(std::move(spec)), fronts_(std::move(fronts)) {
    require_matching(spec_, fronts_);
    const std::size_t n = spec_.transitions();
    pieces_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double a = spec_.a(i);
      const double lg = kernel::log_gap(fronts_.extended(i) / a, fronts_.extended(i + 1) / a);
      pieces_[i] = {spec_.u(i), spec_.rise(i) * std::exp(-lg), lg};
    }
  }

  const ProblemSpec& spec() const { return spec_; }
  const FreeBoundaries& fronts() const { return fronts_; }
  const std::vector<PieceCoefficients>& pieces() const { return pieces_; }

  /// Phase containing xi (fronts themselves are assigned to the phase above).
  std::size_t phase_of(double xi) const {
    const auto values = fronts_.values();
    return static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), xi) - values.begin());
  }

  /// The formula of phase i evaluated at xi, clamped to [u_i, u_{i+1}].
  /// At the phase's own endpoints it returns the endpoint temperatures.
  double piece_value(std::size_t i, double xi) const {
    const double a = spec_.a(i);
    const double y = fronts_.extended(i) / a;
    const double x = fronts_.extended(i + 1) / a;
    const double z = xi / a;
    if (z <= y)
      return spec_.u(i);
    if (z >= x)
      return spec_.u(i + 1);
    const double fraction = std::exp(kernel::log_gap(y, z) - pieces_[i].log_gap);
    return std::clamp(spec_.u(i) + spec_.rise(i) * fraction, spec_.u(i), spec_.u(i + 1));
  }

  /// v(xi). Returns u_i exactly at xi = xi_i and the far-field values at +-inf.
  double profile(double xi) const {
    if (std::isnan(xi))
      return xi;
    const auto values = fronts_.values();
    const auto hit = std::lower_bound(values.begin(), values.end(), xi);
    if (hit != values.end() && *hit == xi)
      return spec_.u(static_cast<std::size_t>(hit - values.begin()) + 1);
    return piece_value(phase_of(xi), xi);
  }

  /// v'(xi) = scale_i F'(xi/a_i) / a_i inside phase i.
  double derivative(double xi) const {
    const std::size_t i = phase_of(xi);
    const double a = spec_.a(i);
    return std::exp(std::log(spec_.rise(i)) - pieces_[i].log_gap + kernel::log_F_prime(xi / a)) / a;
  }

  /// v''(xi) from F'' = -(xi/2) F'.
  double second_derivative(double xi) const {
    const std::size_t i = phase_of(xi);
    const double a = spec_.a(i);
    return -0.5 * (xi / a) * derivative(xi) / a;
  }

  double at(double t, double x) const {
    if (!(t > 0.0))
      throw std::domain_error("evaluate_spacetime: t must be positive");
    return profile(x / std::sqrt(t));
  }

 private:
  ProblemSpec spec_;
  FreeBoundaries fronts_;
  std::vector<PieceCoefficients> pieces_;
};

inline SelfSimilarSolution assemble(const ProblemSpec& spec, const FreeBoundaries& xi_star) {
  return SelfSimilarSolution(spec, xi_star);
}

inline double evaluate_profile(const SelfSimilarSolution& sol, double xi) { return sol.profile(xi); }

inline double evaluate_spacetime(const SelfSimilarSolution& sol, double t, double x) { return sol.at(t, x); }

struct ResidualReport {
  double max_ode_residual = 0.0;     // max |a_i^2 v'' + xi v'/2| at interior samples
  double max_stefan_residual = 0.0;  // max |Stefan condition i|
  double max_interface_jump = 0.0;   // max |v(xi_i -+ 0) - u_i|
  int samples = 0;
};

namespace detail {

// Chebyshev-Gauss nodes on the open interval (lo, hi).
inline std::vector<double> chebyshev_nodes(double lo, double hi, int count) {
  std::vector<double> nodes(static_cast<std::size_t>(count));
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < count; ++k)
    nodes[static_cast<std::size_t>(k)] = mid + half * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * count));
  return nodes;
}

inline constexpr double end_phase_window = 10.0;

}  // namespace detail

/// Checks the heat equation in every phase, continuity at the fronts and
/// the Stefan conditions. End phases are sampled within 10 of their front.
inline ResidualReport validate(const SelfSimilarSolution& sol, int samples_per_phase) {
  if (samples_per_phase < 3)
    throw std::invalid_argument("validate: need at least three samples per phase");
  const auto& spec = sol.spec();
  const auto& fronts = sol.fronts();
  const std::size_t n = spec.transitions();

  ResidualReport report;
  for (std::size_t i = 0; i <= n; ++i) {
    const double lo = i == 0 ? fronts[0] - detail::end_phase_window : fronts.extended(i);
    const double hi = i == n ? fronts[n - 1] + detail::end_phase_window : fronts.extended(i + 1);
    const double a = spec.a(i);
    for (double xi : detail::chebyshev_nodes(lo, hi, samples_per_phase)) {
      if (!(xi > fronts.extended(i) && xi < fronts.extended(i + 1)))
        continue;
      const double residual = a * a * sol.second_derivative(xi) + 0.5 * xi * sol.derivative(xi);
      report.max_ode_residual = std::max(report.max_ode_residual, std::abs(residual));
      ++report.samples;
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double front = fronts[i - 1];
    report.max_interface_jump = std::max(report.max_interface_jump, std::abs(sol.piece_value(i - 1, front) - spec.u(i)));
    report.max_interface_jump = std::max(report.max_interface_jump, std::abs(sol.piece_value(i, front) - spec.u(i)));
    report.max_stefan_residual = std::max(report.max_stefan_residual, std::abs(stefan_condition(spec, fronts, i)));
  }
  return report;
}

}  // namespace stefan
