#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stefan/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Self-similar solutions of the multi-phase Stefan problem with Riemann data"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> grad_tol;
  std::optional<int> max_iter;
  stefan::cli::ProfileRequest profile;

  auto* check = app.add_subcommand("check", "Evaluate the coercivity and convexity criteria");
  check->add_option("config", config_path, "Problem configuration (JSON)")->required();

  auto* solve = app.add_subcommand("solve", "Minimize the energy and validate the solution");
  solve->add_option("config", config_path, "Problem configuration (JSON)")->required();
  solve->add_option("--grad-tol", grad_tol, "Stopping tolerance on the gradient max-norm");
  solve->add_option("--max-iter", max_iter, "Newton iteration limit");

  auto* prof = app.add_subcommand("profile", "Write u(t, x) and the front positions as CSV");
  prof->add_option("config", config_path, "Problem configuration (JSON)")->required();
  prof->add_option("--t", profile.t, "Time t > 0")->required();
  prof->add_option("--x-min", profile.x_min, "Left end of the x range")->required();
  prof->add_option("--x-max", profile.x_max, "Right end of the x range")->required();
  prof->add_option("--samples", profile.samples, "Number of equally spaced samples")->required();
  prof->add_option("--out", profile.out, "Profile CSV path (fronts.csv is written alongside)")->required();

  auto* dump = app.add_subcommand("dump", "Print the parsed configuration");
  dump->add_option("config", config_path, "Problem configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return stefan::cli::kInputError;
  }

  if (check->parsed())
    return stefan::cli::run_check(config_path, std::cout, std::cerr);
  if (solve->parsed())
    return stefan::cli::run_solve(config_path, {grad_tol, max_iter}, std::cout, std::cerr);
  if (prof->parsed())
    return stefan::cli::run_profile(config_path, profile, std::cout, std::cerr);
  return stefan::cli::run_dump(config_path, std::cout, std::cerr);
}
