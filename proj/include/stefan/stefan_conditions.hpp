#pragma once

// Direct transcription of the Stefan conditions in the similarity variable,
//
//   d_i xi_i/2 + k_i (u_{i+1}-u_i) F'(xi_i/a_i) / (a_i (F(xi_{i+1}/a_i) - F(xi_i/a_i)))
//              - k_{i-1} (u_i-u_{i-1}) F'(xi_i/a_{i-1}) / (a_{i-1} (F(xi_i/a_{i-1}) - F(xi_{i-1}/a_{i-1}))) = 0,
//
// using plain F differences. It shares nothing with the
// log-space gradient in energy.hpp, so the two can check each other. It
// loses accuracy once fronts sit deep in a tail.

#include <cstddef>
#include <vector>

#include "stefan/kernel.hpp"
#include "stefan/problem.hpp"

namespace stefan {

inline double stefan_condition(const ProblemSpec& spec, const FreeBoundaries& xi, std::size_t i) {
  using kernel::F;
  using kernel::F_prime;
  const double front = xi.extended(i);
  const double ahead = xi.extended(i + 1);
  const double behind = xi.extended(i - 1);
  const double a_out = spec.a(i);
  const double a_in = spec.a(i - 1);
  const double outgoing =
      spec.k(i) * spec.rise(i) * F_prime(front / a_out) / (a_out * (F(ahead / a_out) - F(front / a_out)));
  const double incoming =
      spec.k(i - 1) * spec.rise(i - 1) * F_prime(front / a_in) / (a_in * (F(front / a_in) - F(behind / a_in)));
  return spec.d(i) * front / 2.0 + outgoing - incoming;
}

/// All n Stefan-condition residuals.
inline std::vector<double> stefan_conditions(const ProblemSpec& spec, const FreeBoundaries& xi) {
  require_matching(spec, xi);
  std::vector<double> r(spec.transitions());
  for (std::size_t i = 1; i <= spec.transitions(); ++i)
    r[i - 1] = stefan_condition(spec, xi, i);
  return r;
}

}  // namespace stefan
