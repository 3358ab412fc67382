#pragma once

// Damped Newton minimization of the energy over the ordered domain
// xi_1 < ... < xi_n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stefan/energy.hpp"
#include "stefan/problem.hpp"

namespace stefan {

struct SolveOptions {
  double grad_tol = 1e-12;       // stop when ||grad E||_inf <= grad_tol
  int max_iter = 200;
  double xi_max = 1e2;           // divergence radius in ||xi||_inf
  double boundary_fraction = 0.9;
  double damping_min = 1e-12;

  void validate() const {
    if (!(grad_tol > 0.0))
      throw std::invalid_argument("solver.grad_tol must be positive");
    if (max_iter <= 0)
      throw std::invalid_argument("solver.max_iter must be positive");
    if (!(xi_max > 0.0))
      throw std::invalid_argument("solver.xi_max must be positive");
    if (!(boundary_fraction > 0.0 && boundary_fraction < 1.0))
      throw std::invalid_argument("solver.boundary_fraction must lie in (0, 1)");
    if (!(damping_min > 0.0))
      throw std::invalid_argument("solver.damping_min must be positive");
  }

  friend bool operator==(const SolveOptions&, const SolveOptions&) = default;
};

enum class SolveStatus { Converged, Diverged, MaxIterations };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::Diverged:
      return "Diverged";
    case SolveStatus::MaxIterations:
      return "MaxIterations";
  }
  return "Unknown";
}

struct TraceRecord {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIterations;
  std::optional<FreeBoundaries> xi_star;  // set only when Converged
  FreeBoundaries last_iterate;
  double energy_value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<TraceRecord> trace;
  std::string message;
};

struct NewtonStep {
  std::vector<double> direction;
  double damping_used = 0.0;
};

/// Raised when no diagonal shift up to max_damping makes the Hessian
/// factorizable.
class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

inline constexpr double max_damping = 1e12;
inline constexpr double armijo = 1e-4;
inline constexpr double backtrack = 0.5;
inline constexpr int divergence_window = 10;

// Largest step t with xi + t p still ordered (may be +inf).
inline double distance_to_boundary(std::span<const double> xi, std::span<const double> p) {
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    const double closing = p[i] - p[i + 1];
    if (closing > 0.0)
      t = std::min(t, (xi[i + 1] - xi[i]) / closing);
  }
  return t;
}

}  // namespace detail

/// Solves (H + lambda I) p = -grad E. lambda is 0 when H is positive
/// definite, otherwise the first value of damping_min * 2^m that makes the
/// Cholesky factorization succeed.
inline NewtonStep newton_step(const ProblemSpec& spec, const FreeBoundaries& xi, double damping_min = 1e-12) {
  require_matching(spec, xi);
  const auto g = gradient(spec, xi);
  const Eigen::MatrixXd h = hessian(spec, xi);
  const auto rhs = -detail::as_eigen(g);
  const auto n = h.rows();

  double lambda = 0.0;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt(h + lambda * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd p = llt.solve(rhs);
      NewtonStep step{std::vector<double>(p.data(), p.data() + n), lambda};
      if (p.allFinite())
        return step;
    }
    lambda = lambda == 0.0 ? damping_min : 2.0 * lambda;
    if (lambda > detail::max_damping)
      throw NumericalBreakdown("newton_step: damping exceeded 1e12");
  }
}

/// Point on the ray along which E -> -inf when S^r < 0:
/// xi_i = -sigma + i - r for i <= r and xi_i = i - r for i > r.
inline FreeBoundaries ray_point(const ProblemSpec& spec, std::size_t r, double sigma) {
  const std::size_t n = spec.transitions();
  if (r < 1 || r > n)
    throw std::out_of_range("ray_point: r must lie in 1..n");
  if (!(sigma > 0.0))
    throw std::domain_error("ray_point: sigma must be positive");
  std::vector<double> xi(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double offset = static_cast<double>(i) - static_cast<double>(r);
    xi[i - 1] = i <= r ? -sigma + offset : offset;
  }
  return FreeBoundaries(std::move(xi));
}

/// Mirror image of ray_point for S_r < 0: the fronts r..n escape to +inf.
inline FreeBoundaries ray_point_right(const ProblemSpec& spec, std::size_t r, double sigma) {
  const std::size_t n = spec.transitions();
  if (r < 1 || r > n)
    throw std::out_of_range("ray_point_right: r must lie in 1..n");
  if (!(sigma > 0.0))
    throw std::domain_error("ray_point_right: sigma must be positive");
  std::vector<double> xi(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double offset = static_cast<double>(i) - static_cast<double>(r);
    xi[i - 1] = i >= r ? sigma + offset : offset;
  }
  return FreeBoundaries(std::move(xi));
}

/// xi_i = (i - (n+1)/2) * mean(a).
inline FreeBoundaries default_start(const ProblemSpec& spec) {
  const std::size_t n = spec.transitions();
  const double scale = spec.mean_diffusivity();
  std::vector<double> xi(n);
  for (std::size_t i = 1; i <= n; ++i)
    xi[i - 1] = (static_cast<double>(i) - 0.5 * static_cast<double>(n + 1)) * scale;
  return FreeBoundaries(std::move(xi));
}

namespace detail {

// Unit eigenvector of the smallest Hessian eigenvalue, oriented downhill
// (ties broken towards a negative first component).
inline std::vector<double> negative_curvature_direction(const Eigen::MatrixXd& h, std::span<const double> g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  Eigen::VectorXd v = eig.eigenvectors().col(0);
  const double slope = as_eigen(g).dot(v);
  if (slope > 0.0 || (slope == 0.0 && v(0) > 0.0))
    v = -v;
  return {v.data(), v.data() + v.size()};
}

}  // namespace detail

/// Minimizes the energy starting from `start`.
///
/// Each iteration takes a damped Newton direction, caps the step so that the
/// iterate stays a fixed fraction away from the boundary of the ordered
/// domain and moves at most max(1, ||xi||_inf) in any coordinate, then
/// backtracks until the Armijo condition holds. Once the energy decrease
/// predicted by the model is below its rounding level, a step is accepted
/// when it reduces the gradient instead.
///
/// A small gradient at a point where the Hessian is not positive definite is
/// a saddle or a maximum; the solver then moves along the direction of most
/// negative curvature instead of stopping.
inline SolveResult minimize(const ProblemSpec& spec, const SolveOptions& opts, const FreeBoundaries& start) {
  opts.validate();
  require_matching(spec, start);
  const std::size_t n = spec.transitions();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  std::vector<double> xi = start.vector();
  double e = energy(spec, xi);
  std::vector<double> g = gradient(spec, xi);
  double gnorm = detail::inf_norm(g);

  SolveResult result;
  result.trace.push_back({0, e, gnorm});

  const auto finish = [&](SolveStatus status, int iterations, std::string message) {
    result.status = status;
    result.last_iterate = FreeBoundaries(xi);
    if (status == SolveStatus::Converged)
      result.xi_star = result.last_iterate;
    result.energy_value = e;
    result.grad_norm = gnorm;
    result.iterations = iterations;
    result.message = std::move(message);
    return result;
  };

  for (int it = 1; it <= opts.max_iter; ++it) {
    std::vector<double> p;
    if (gnorm <= opts.grad_tol) {
      const Eigen::MatrixXd h = hessian(spec, xi);
      Eigen::LLT<Eigen::MatrixXd> llt(h);
      if (llt.info() == Eigen::Success)
        return finish(SolveStatus::Converged, it - 1, "gradient tolerance reached");
      p = detail::negative_curvature_direction(h, g);
    } else {
      try {
        p = newton_step(spec, FreeBoundaries(xi), opts.damping_min).direction;
      } catch (const NumericalBreakdown& ex) {
        return finish(SolveStatus::MaxIterations, it - 1, ex.what());
      }
    }

    const double slope = detail::dot(g, p);
    const double pnorm = detail::inf_norm(p);
    double step = std::min(1.0, opts.boundary_fraction * detail::distance_to_boundary(xi, p));
    const double reach = std::max(1.0, detail::inf_norm(xi));
    if (pnorm > 0.0)
      step = std::min(step, reach / pnorm);

    bool accepted = false;
    std::vector<double> trial(n);
    double trial_e = e;
    std::vector<double> trial_g;
    while (step * pnorm > 4.0 * eps * reach) {
      for (std::size_t i = 0; i < n; ++i)
        trial[i] = xi[i] + step * p[i];
      trial_g.clear();
      if (FreeBoundaries::feasible(trial)) {
        trial_e = energy(spec, trial);
        if (std::isfinite(trial_e)) {
          if (trial_e <= e + detail::armijo * step * slope) {
            accepted = true;
          } else if (std::abs(step * slope) <= 64.0 * eps * std::max(1.0, std::abs(e))) {
            trial_g = gradient(spec, trial);
            accepted = detail::inf_norm(trial_g) < gnorm;
          }
        }
      }
      if (accepted)
        break;
      step *= detail::backtrack;
    }
    if (!accepted)
      return finish(SolveStatus::MaxIterations, it - 1, "line search failed to make progress");

    xi = trial;
    e = trial_e;
    g = trial_g.empty() ? gradient(spec, xi) : std::move(trial_g);
    gnorm = detail::inf_norm(g);
    result.trace.push_back({it, e, gnorm});

    if (detail::inf_norm(xi) > opts.xi_max && it >= detail::divergence_window) {
      const auto& tr = result.trace;
      bool decreasing = true;
      for (std::size_t k = tr.size() - detail::divergence_window; k < tr.size(); ++k)
        decreasing = decreasing && tr[k].energy < tr[k - 1].energy;
      if (decreasing)
        return finish(SolveStatus::Diverged, it, "iterates left the divergence radius with decreasing energy");
    }
  }

  if (gnorm <= opts.grad_tol) {
    Eigen::LLT<Eigen::MatrixXd> llt(hessian(spec, xi));
    if (llt.info() == Eigen::Success)
      return finish(SolveStatus::Converged, opts.max_iter, "gradient tolerance reached");
  }
  return finish(SolveStatus::MaxIterations, opts.max_iter, "iteration limit reached");
}

inline SolveResult minimize(const ProblemSpec& spec, const SolveOptions& opts = {}) {
  return minimize(spec, opts, default_start(spec));
}

}  // namespace stefan
