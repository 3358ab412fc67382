#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stefan {

/// Physical data of a Riemann problem with n phase transitions.
///
/// Phases are numbered 0..n, transitions 1..n. Phase i occupies the
/// temperature range (u_i, u_{i+1}) and carries diffusivity a_i and
/// conductivity k_i; transition i carries the Stefan number d_i (any sign).
class ProblemSpec {
 public:
  ProblemSpec(std::vector<double> temperatures, std::vector<double> diffusivities,
              std::vector<double> conductivities, std::vector<double> stefan_numbers)
      : u_(std::move(temperatures)),
        a_(std::move(diffusivities)),
        k_(std::move(conductivities)),
        d_(std::move(stefan_numbers)) {
    validate();
  }

  /// Number of phase transitions n (>= 1).
  std::size_t transitions() const { return d_.size(); }
  std::size_t phases() const { return a_.size(); }

  std::span<const double> temperatures() const { return u_; }
  std::span<const double> diffusivities() const { return a_; }
  std::span<const double> conductivities() const { return k_; }
  std::span<const double> stefan_numbers() const { return d_; }

  double u(std::size_t i) const { return u_[i]; }
  double a(std::size_t i) const { return a_[i]; }
  double k(std::size_t i) const { return k_[i]; }
  // 1-based, matching the transition numbering.
  double d(std::size_t i) const { return d_[i - 1]; }

  /// Temperature rise u_{i+1} - u_i across phase i.
  double rise(std::size_t i) const { return u_[i + 1] - u_[i]; }

  /// kappa_i = k_i / a_i^2.
  double kappa(std::size_t i) const { return k_[i] / (a_[i] * a_[i]); }

  /// kappa_i (u_{i+1} - u_i), the weight that recurs in every criterion.
  double kappa_rise(std::size_t i) const { return kappa(i) * rise(i); }

  double mean_diffusivity() const {
    double sum = 0.0;
    for (double a : a_)
      sum += a;
    return sum / static_cast<double>(a_.size());
  }

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

 private:
  void validate() const {
    if (u_.size() < 3)
      throw std::invalid_argument("temperatures: at least three values (one phase transition) are required");
    const std::size_t n = u_.size() - 2;
    const auto require_size = [](const std::vector<double>& v, std::size_t expected, const char* name) {
      if (v.size() != expected)
        throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(expected) + " values, got " +
                                    std::to_string(v.size()));
    };
    require_size(a_, n + 1, "diffusivities");
    require_size(k_, n + 1, "conductivities");
    require_size(d_, n, "stefan_numbers");
    for (std::size_t i = 0; i < u_.size(); ++i) {
      if (!std::isfinite(u_[i]))
        throw std::invalid_argument("temperatures: values must be finite");
      if (i > 0 && !(u_[i - 1] < u_[i]))
        throw std::invalid_argument("temperatures: must be strictly increasing");
    }
    for (double a : a_)
      if (!(std::isfinite(a) && a > 0.0))
        throw std::invalid_argument("diffusivities: values must be finite and positive");
    for (double k : k_)
      if (!(std::isfinite(k) && k > 0.0))
        throw std::invalid_argument("conductivities: values must be finite and positive");
    for (double d : d_)
      if (!std::isfinite(d))
        throw std::invalid_argument("stefan_numbers: values must be finite");
  }

  std::vector<double> u_;
  std::vector<double> a_;
  std::vector<double> k_;
  std::vector<double> d_;
};

/// Similarity coordinates xi_1 < ... < xi_n of the fronts, i.e. a point of
/// the open ordered domain.
class FreeBoundaries {
 public:
  FreeBoundaries() = default;

  explicit FreeBoundaries(std::vector<double> xi) : xi_(std::move(xi)) {
    for (std::size_t i = 0; i < xi_.size(); ++i) {
      if (!std::isfinite(xi_[i]))
        throw std::domain_error("free boundaries must be finite");
      if (i > 0 && !(xi_[i - 1] < xi_[i]))
        throw std::domain_error("free boundaries must be strictly increasing");
    }
  }

  /// True when xi is finite and strictly increasing.
  static bool feasible(std::span<const double> xi) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (!std::isfinite(xi[i]) || (i > 0 && !(xi[i - 1] < xi[i])))
        return false;
    }
    return true;
  }

  std::size_t size() const { return xi_.size(); }
  std::span<const double> values() const { return xi_; }
  const std::vector<double>& vector() const { return xi_; }

  /// 1-based front coordinate; index 0 is -inf and n+1 is +inf.
  double extended(std::size_t i) const {
    if (i == 0)
      return -std::numeric_limits<double>::infinity();
    if (i > xi_.size())
      return std::numeric_limits<double>::infinity();
    return xi_[i - 1];
  }

  double operator[](std::size_t i) const { return xi_[i]; }

  friend bool operator==(const FreeBoundaries&, const FreeBoundaries&) = default;

 private:
  std::vector<double> xi_;
};

inline void require_matching(const ProblemSpec& spec, const FreeBoundaries& xi) {
  if (xi.size() != spec.transitions())
    throw std::domain_error("expected " + std::to_string(spec.transitions()) + " free boundaries, got " +
                            std::to_string(xi.size()));
}

}  // namespace stefan
