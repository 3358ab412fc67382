#pragma once

// Variational energy whose critical points are the self-similar solutions:
//
//   E(xi) = - sum_{i=0}^{n} k_i (u_{i+1}-u_i) ln(F(xi_{i+1}/a_i) - F(xi_i/a_i))
//           + sum_{i=1}^{n} d_i xi_i^2 / 4
//
// with xi_0 = -inf, xi_{n+1} = +inf. Its gradient is the vector of Stefan
// conditions written in the similarity variable, and its Hessian is
// tridiagonal.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "stefan/kernel.hpp"
#include "stefan/problem.hpp"

namespace stefan {

/// Second-derivative building blocks of the per-phase log terms.
///
/// beta_minus[i-1] holds beta_i^- (i = 1..n), beta_plus[i] holds beta_i^+
/// (i = 0..n-1) and gamma[i] holds gamma_i (i = 0..n).
struct HessianParts {
  std::vector<double> beta_minus;
  std::vector<double> beta_plus;
  std::vector<double> gamma;
};

namespace detail {

// Quantities of phase i, which spans (xi_i, xi_{i+1}) in the similarity
// variable, scaled by its diffusivity: y = xi_i/a_i, x = xi_{i+1}/a_i.
struct PhaseTerms {
  double y;
  double x;
  double log_gap;  // ln(F(x) - F(y))
  double ratio_y;  // F'(y) / (F(x) - F(y))
  double ratio_x;  // F'(x) / (F(x) - F(y))
};

inline PhaseTerms phase_terms(const ProblemSpec& spec, std::span<const double> xi, std::size_t phase) {
  const std::size_t n = spec.transitions();
  const double a = spec.a(phase);
  PhaseTerms t{};
  t.y = phase == 0 ? -kernel::inf : xi[phase - 1] / a;
  t.x = phase == n ? kernel::inf : xi[phase] / a;
  t.log_gap = kernel::log_gap(t.y, t.x);
  t.ratio_y = std::exp(kernel::log_F_prime(t.y) - t.log_gap);
  t.ratio_x = std::exp(kernel::log_F_prime(t.x) - t.log_gap);
  return t;
}

inline void check_point(const ProblemSpec& spec, std::span<const double> xi) {
  if (xi.size() != spec.transitions())
    throw std::domain_error("dimension of free boundaries does not match the problem");
  if (!FreeBoundaries::feasible(xi))
    throw std::domain_error("free boundaries must be finite and strictly increasing");
}

}  // namespace detail

inline double energy(const ProblemSpec& spec, std::span<const double> xi) {
  detail::check_point(spec, xi);
  const std::size_t n = spec.transitions();
  double value = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double y = i == 0 ? -kernel::inf : xi[i - 1] / spec.a(i);
    const double x = i == n ? kernel::inf : xi[i] / spec.a(i);
    value -= spec.k(i) * spec.rise(i) * kernel::log_gap(y, x);
  }
  for (std::size_t i = 1; i <= n; ++i)
    value += 0.25 * spec.d(i) * xi[i - 1] * xi[i - 1];
  return value;
}

inline double energy(const ProblemSpec& spec, const FreeBoundaries& xi) { return energy(spec, xi.values()); }

/// Gradient of the energy. Component i is the residual of the i-th Stefan
/// condition: d_i xi_i/2 + (outgoing flux into phase i) - (flux from phase i-1).
inline std::vector<double> gradient(const ProblemSpec& spec, std::span<const double> xi) {
  detail::check_point(spec, xi);
  const std::size_t n = spec.transitions();
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const auto t = detail::phase_terms(spec, xi, i);
    const double weight = spec.k(i) * spec.rise(i) / spec.a(i);
    if (i >= 1)
      g[i - 1] += weight * t.ratio_y;
    if (i < n)
      g[i] -= weight * t.ratio_x;
  }
  for (std::size_t i = 1; i <= n; ++i)
    g[i - 1] += 0.5 * spec.d(i) * xi[i - 1];
  return g;
}

inline std::vector<double> gradient(const ProblemSpec& spec, const FreeBoundaries& xi) {
  return gradient(spec, xi.values());
}

inline HessianParts hessian_parts(const ProblemSpec& spec, std::span<const double> xi) {
  detail::check_point(spec, xi);
  const std::size_t n = spec.transitions();
  HessianParts parts;
  parts.beta_minus.assign(n, 0.0);
  parts.beta_plus.assign(n, 0.0);
  parts.gamma.assign(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const auto t = detail::phase_terms(spec, xi, i);
    const double w = spec.kappa_rise(i);
    // (F'(x) - F'(y)) / (F(x) - F(y)) == ratio_x - ratio_y
    if (i >= 1)
      parts.beta_minus[i - 1] = w * t.ratio_y * (-0.5 * t.y - t.ratio_x + t.ratio_y);
    if (i < n)
      parts.beta_plus[i] = w * t.ratio_x * (0.5 * t.x + t.ratio_x - t.ratio_y);
    if (i >= 1 && i < n)
      parts.gamma[i] = w * t.ratio_x * t.ratio_y;
  }
  return parts;
}

inline HessianParts hessian_parts(const ProblemSpec& spec, const FreeBoundaries& xi) {
  return hessian_parts(spec, xi.values());
}

/// Symmetric tridiagonal Hessian assembled from the parts:
///   H_ii = beta_i^- + gamma_i + beta_{i-1}^+ + gamma_{i-1} + d_i/2,
///   H_{i,i+1} = -gamma_i.
inline Eigen::MatrixXd hessian(const ProblemSpec& spec, std::span<const double> xi) {
  const auto parts = hessian_parts(spec, xi);
  const auto n = static_cast<Eigen::Index>(spec.transitions());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j) + 1;
    h(j, j) = parts.beta_minus[i - 1] + parts.gamma[i] + parts.beta_plus[i - 1] + parts.gamma[i - 1] +
              0.5 * spec.d(i);
    if (j + 1 < n) {
      h(j, j + 1) = -parts.gamma[i];
      h(j + 1, j) = -parts.gamma[i];
    }
  }
  return h;
}

inline Eigen::MatrixXd hessian(const ProblemSpec& spec, const FreeBoundaries& xi) {
  return hessian(spec, xi.values());
}

}  // namespace stefan
