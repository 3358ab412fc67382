#pragma once

// Similarity kernel of the heat equation:
//
//     F(xi) = 1/(2 sqrt(pi)) * int_{-inf}^{xi} exp(-s^2/4) ds = erfc(-xi/2)/2
//
// Everything here is built on exp/log/sqrt only. Tails are carried in log
// form so that ratios such as F'(y)/(F(x)-F(y)) stay finite far from the
// origin, where the individual factors underflow.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace stefan::kernel {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// 1/(2 sqrt(pi)), the peak value of F'.
inline constexpr double peak_density = 0.5 * std::numbers::inv_sqrtpi;

/// A kernel quantity together with its natural log (when one was computed).
struct KernelValue {
  double value = 0.0;
  std::optional<double> log_form;
};

namespace detail {

// erf(t) = 2/sqrt(pi) exp(-t^2) sum_{n>=0} 2^n t^{2n+1} / (1*3*...*(2n+1)).
// Every term is positive, so this is cancellation-free; used for small t.
inline double erf_series(double t) {
  double term = t;
  double sum = t;
  const double two_t2 = 2.0 * t * t;
  for (int n = 1; n < 200; ++n) {
    term *= two_t2 / (2 * n + 1);
    sum += term;
    if (term <= 1e-17 * sum)
      break;
  }
  return 2.0 * std::numbers::inv_sqrtpi * std::exp(-t * t) * sum;
}

// Laplace continued fraction
//   erfcx(t) = 1/sqrt(pi) / (t + (1/2)/(t + 1/(t + (3/2)/(t + ...))))
// evaluated backwards. The depth needed for full double precision grows like
// 1/t^2 (about 690 levels at t = 0.5, 13 at t = 6).
inline double erfcx_continued_fraction(double t) {
  const int depth = static_cast<int>(std::ceil(200.0 / (t * t))) + 12;
  double f = t;
  for (int k = depth; k >= 1; --k)
    f = t + 0.5 * k / f;
  return std::numbers::inv_sqrtpi / f;
}

inline constexpr double series_cutoff = 0.5;

}  // namespace detail

/// Scaled complementary error function exp(t^2) erfc(t), for t >= 0.
/// Relative accuracy is a few ulp over the whole half-line.
inline double erfcx(double t) {
  if (std::isnan(t) || t < 0.0)
    throw std::domain_error("erfcx: argument must be nonnegative");
  if (t == inf)
    return 0.0;
  if (t < detail::series_cutoff)
    return std::exp(t * t) * (1.0 - detail::erf_series(t));
  return detail::erfcx_continued_fraction(t);
}

/// erf(t) for t >= 0 with full relative accuracy near zero.
inline double erf_nonnegative(double t) {
  if (t == inf)
    return 1.0;
  if (t < detail::series_cutoff)
    return detail::erf_series(t);
  return 1.0 - erfcx(t) * std::exp(-t * t);
}

/// 1 - F(xi) for xi >= 0 (the upper tail). Relative accuracy is kept in
/// the tail; returns 0 at +inf.
inline double upper_tail(double xi) {
  if (xi == inf)
    return 0.0;
  return 0.5 * erfcx(0.5 * xi) * std::exp(-0.25 * xi * xi);
}

/// ln(1 - F(xi)) for xi >= 0; -inf at +inf.
inline double log_upper_tail(double xi) {
  if (xi == inf)
    return -inf;
  return std::log(0.5 * erfcx(0.5 * xi)) - 0.25 * xi * xi;
}

/// The upper tail 1 - F(xi) for any xi, with its log when xi >= 0.
inline KernelValue tail(double xi) {
  if (xi >= 0.0)
    return {upper_tail(xi), log_upper_tail(xi)};
  return {1.0 - upper_tail(-xi), std::nullopt};
}

/// F(xi); F(-inf) = 0 and F(+inf) = 1 exactly.
inline double F(double xi) {
  if (std::isnan(xi))
    return xi;
  if (xi >= 0.0)
    return 1.0 - upper_tail(xi);
  return upper_tail(-xi);
}

/// F'(xi) = exp(-xi^2/4) / (2 sqrt(pi)); zero at +-inf.
inline double F_prime(double xi) {
  if (std::isinf(xi))
    return 0.0;
  return peak_density * std::exp(-0.25 * xi * xi);
}

/// ln F'(xi); -inf at +-inf.
inline double log_F_prime(double xi) {
  if (std::isinf(xi))
    return -inf;
  return std::log(peak_density) - 0.25 * xi * xi;
}

/// ln(1 - exp(d)) for d <= 0.
inline double log1mexp(double d) {
  if (d > -std::numbers::ln2)
    return std::log(-std::expm1(d));
  return std::log1p(-std::exp(d));
}

namespace detail {

struct GaussLegendreRule {
  static constexpr int size = 16;
  std::array<double, size> nodes{};
  std::array<double, size> weights{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_16.
inline const GaussLegendreRule& gauss_legendre() {
  static const GaussLegendreRule rule = [] {
    GaussLegendreRule r;
    constexpr int n = GaussLegendreRule::size;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16)
          break;
      }
      r.nodes[i] = -z;
      r.nodes[n - 1 - i] = z;
      r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// ln of the integral of F' over [a, b], 0 <= a < b, for intervals on which
// F' changes by a modest factor. The integrand is scaled by F'(a).
inline double log_short_gap(double a, double b) {
  const auto& rule = gauss_legendre();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 0; k < GaussLegendreRule::size; ++k) {
    const double s = mid + half * rule.nodes[k];
    sum += rule.weights[k] * std::exp(-0.25 * (s - a) * (s + a));
  }
  return std::log(peak_density) - 0.25 * a * a + std::log(half * sum);
}

// ln(Q(a) - Q(b)) for 0 <= a < b <= +inf, with Q = 1 - F.
inline double log_tail_difference(double a, double b) {
  const double log_qa = log_upper_tail(a);
  if (b == inf)
    return log_qa;
  // ln(Q(b)/Q(a)) without forming either tail.
  const double log_ratio = std::log(erfcx(0.5 * b) / erfcx(0.5 * a)) - 0.25 * (b - a) * (b + a);
  // Q(b) close to Q(a): the difference would cancel, integrate F' instead.
  if (log_ratio > -0.5)
    return log_short_gap(a, b);
  return log_qa + log1mexp(log_ratio);
}

}  // namespace detail

/// ln(F(b) - F(a)) for a < b, either end may be infinite.
///
/// When both ends lie on the same side of the origin the difference of
/// complementary tails is formed in log space, so the result keeps its
/// relative accuracy in the far tails (e.g. a = -40, b = -39).
inline double log_gap(double a, double b) {
  if (!(a < b))
    throw std::domain_error("log_gap: requires a < b");
  if (a >= 0.0)
    return detail::log_tail_difference(a, b);
  if (b <= 0.0)
    return detail::log_tail_difference(-b, -a);
  const double outside = upper_tail(b) + upper_tail(-a);
  if (outside <= 0.5)
    return std::log1p(-outside);
  return std::log(0.5 * (erf_nonnegative(0.5 * b) + erf_nonnegative(-0.5 * a)));
}

}  // namespace stefan::kernel
