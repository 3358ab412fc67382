#pragma once

// Implementation of the `stefan` command-line subcommands. Each command
// writes its JSON report to `out`, diagnostics to `err`, and returns the
// process exit code.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "stefan/config.hpp"
#include "stefan/optimizer.hpp"
#include "stefan/solution.hpp"
#include "stefan/wellposedness.hpp"

namespace stefan::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNotCoercive = 2,
  kDiverged = 3,
  kMaxIterations = 4,
};

inline constexpr int kValidationSamplesPerPhase = 64;

struct SolveOverrides {
  std::optional<double> grad_tol;
  std::optional<int> max_iter;
};

struct ProfileRequest {
  double t = 1.0;
  double x_min = -5.0;
  double x_max = 5.0;
  int samples = 101;
  std::string out;
};

namespace detail {

inline std::optional<ProblemConfig> load(const std::string& path, std::ostream& err) {
  try {
    return load_config(path);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
  }
  return std::nullopt;
}

inline int exit_code_of(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return kOk;
    case SolveStatus::Diverged:
      return kDiverged;
    case SolveStatus::MaxIterations:
      return kMaxIterations;
  }
  return kMaxIterations;
}

struct SolveOutcome {
  WellPosednessReport check;
  SolveResult result;
  std::optional<ResidualReport> residuals;
};

inline SolveOutcome solve(const ProblemConfig& config) {
  SolveOutcome outcome{check_wellposedness(config.spec), minimize(config.spec, config.solver), std::nullopt};
  if (outcome.result.xi_star)
    outcome.residuals = validate(assemble(config.spec, *outcome.result.xi_star), kValidationSamplesPerPhase);
  return outcome;
}

inline nlohmann::json solve_report(const SolveOutcome& o) {
  nlohmann::json j = to_json(o.result);
  j["check"] = to_json(o.check);
  j["residuals"] = o.residuals ? to_json(*o.residuals) : nlohmann::json(nullptr);
  return j;
}

}  // namespace detail

/// `stefan check <cfg>`: exit 0 when coercive, 2 when not, 1 on bad input.
inline int run_check(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto config = detail::load(config_path, err);
  if (!config)
    return kInputError;
  const auto report = check_wellposedness(config->spec);
  out << to_json(report).dump(2) << '\n';
  return report.coercive ? kOk : kNotCoercive;
}

/// `stefan solve <cfg>`: exit 0 on Converged, 3 on Diverged, 4 when the
/// iteration limit is hit, 1 on bad input.
inline int run_solve(const std::string& config_path, const SolveOverrides& overrides, std::ostream& out,
                     std::ostream& err) {
  auto config = detail::load(config_path, err);
  if (!config)
    return kInputError;
  if (overrides.grad_tol)
    config->solver.grad_tol = *overrides.grad_tol;
  if (overrides.max_iter)
    config->solver.max_iter = *overrides.max_iter;
  try {
    config->solver.validate();
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return kInputError;
  }
  const auto outcome = detail::solve(*config);
  out << detail::solve_report(outcome).dump(2) << '\n';
  return detail::exit_code_of(outcome.result.status);
}

/// `stefan profile <cfg> ...`: solves, then writes "x,xi,u" rows to
/// request.out and "i,xi,x_at_t" rows to fronts.csv in the same directory.
inline int run_profile(const std::string& config_path, const ProfileRequest& request, std::ostream& out,
                       std::ostream& err) {
  const auto config = detail::load(config_path, err);
  if (!config)
    return kInputError;
  if (!(request.t > 0.0) || !std::isfinite(request.t)) {
    err << "error: --t must be positive\n";
    return kInputError;
  }
  if (request.samples < 2) {
    err << "error: --samples must be at least 2\n";
    return kInputError;
  }
  if (!(request.x_min < request.x_max)) {
    err << "error: --x-min must be less than --x-max\n";
    return kInputError;
  }

  const auto outcome = detail::solve(*config);
  if (!outcome.result.xi_star) {
    err << "error: solve did not converge (" << to_string(outcome.result.status) << ")\n";
    out << detail::solve_report(outcome).dump(2) << '\n';
    return detail::exit_code_of(outcome.result.status);
  }
  const auto solution = assemble(config->spec, *outcome.result.xi_star);

  const std::filesystem::path profile_path(request.out);
  const auto fronts_path = profile_path.parent_path() / "fronts.csv";
  std::ofstream profile(profile_path);
  if (!profile) {
    err << "error: cannot write '" << profile_path.string() << "'\n";
    return kInputError;
  }
  std::ofstream fronts(fronts_path);
  if (!fronts) {
    err << "error: cannot write '" << fronts_path.string() << "'\n";
    return kInputError;
  }

  const double root_t = std::sqrt(request.t);
  profile << "x,xi,u\n";
  for (int s = 0; s < request.samples; ++s) {
    const double x = s + 1 == request.samples
                         ? request.x_max
                         : request.x_min + (request.x_max - request.x_min) * s / (request.samples - 1);
    const double xi = x / root_t;
    profile << format_number(x) << ',' << format_number(xi) << ',' << format_number(solution.profile(xi)) << '\n';
  }
  fronts << "i,xi,x_at_t\n";
  const auto& xi_star = *outcome.result.xi_star;
  for (std::size_t i = 0; i < xi_star.size(); ++i)
    fronts << i + 1 << ',' << format_number(xi_star[i]) << ',' << format_number(xi_star[i] * root_t) << '\n';

  profile.flush();
  fronts.flush();
  if (!profile || !fronts) {
    err << "error: failed writing profile output\n";
    return kInputError;
  }
  out << nlohmann::json{{"status", to_string(outcome.result.status)},
                        {"xi_star", xi_star.vector()},
                        {"profile", profile_path.string()},
                        {"fronts", fronts_path.string()}}
             .dump(2)
      << '\n';
  return kOk;
}

/// `stefan dump <cfg>`: re-emits the parsed configuration (with solver
/// defaults filled in).
inline int run_dump(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto config = detail::load(config_path, err);
  if (!config)
    return kInputError;
  out << to_json(*config).dump(2) << '\n';
  return kOk;
}

}  // namespace stefan::cli
