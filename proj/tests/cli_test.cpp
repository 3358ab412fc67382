#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "stefan/commands.hpp"
#include "stefan/oracles.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string data(const std::string& name) { return std::string(STEFAN_TEST_DATA) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run check(const std::string& path) {
  std::ostringstream out, err;
  const int code = stefan::cli::run_check(path, out, err);
  return {code, out.str(), err.str()};
}

Run solve(const std::string& path, stefan::cli::SolveOverrides overrides = {}) {
  std::ostringstream out, err;
  const int code = stefan::cli::run_solve(path, overrides, out, err);
  return {code, out.str(), err.str()};
}

Run profile(const std::string& path, const stefan::cli::ProfileRequest& request) {
  std::ostringstream out, err;
  const int code = stefan::cli::run_profile(path, request, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    lines.push_back(line);
  return lines;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stefan_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  fs::path dir_;
};

using Config = TempDir;
using CommandFiles = TempDir;

TEST_F(Config, ParsesAndRoundTrips) {
  const auto config = stefan::load_config(data("two_fronts.json"));
  EXPECT_EQ(config.spec.transitions(), 2u);
  const auto again = stefan::parse_config(json::parse(stefan::to_json(config).dump()));
  EXPECT_EQ(again.spec, config.spec);
  EXPECT_EQ(again.solver, config.solver);
}

TEST_F(Config, RoundTripIsBitExact) {
  const std::string text = R"({"temperatures": [-0.1, 0.30000000000000004, 1.0000000000000002, 7.123456789012345],
    "diffusivities": [0.1, 2.5e-3, 3.0], "conductivities": [1, 0.7, 1.9],
    "stefan_numbers": [-0.123456789, 5e-17], "solver": {"grad_tol": 3e-13, "max_iter": 77}})";
  const auto config = stefan::load_config(write("cfg.json", text));
  const auto again = stefan::parse_config(json::parse(stefan::to_json(config).dump()));
  EXPECT_EQ(again.spec, config.spec);
  EXPECT_EQ(again.solver, config.solver);
  EXPECT_EQ(again.spec.u(1), 0.30000000000000004);
  EXPECT_EQ(again.solver.max_iter, 77);
}

TEST_F(Config, ErrorsNameTheKey) {
  const auto key_of = [&](const std::string& text) {
    try {
      stefan::load_config(write("bad.json", text));
    } catch (const stefan::ConfigError& e) {
      return e.key();
    }
    return std::string("(none)");
  };
  EXPECT_EQ(key_of(R"({"temperatures": [-1, 0, 1], "diffusivities": [1, 1], "stefan_numbers": [0]})"),
            "conductivities");
  EXPECT_EQ(key_of(R"({"temperatures": [-1, 1, 0], "diffusivities": [1, 1], "conductivities": [1, 1],
                       "stefan_numbers": [0]})"),
            "temperatures");
  EXPECT_EQ(key_of(R"({"temperatures": [-1, 0, 1], "diffusivities": [1, "x"], "conductivities": [1, 1],
                       "stefan_numbers": [0]})"),
            "diffusivities");
  EXPECT_EQ(key_of(R"({"temperatures": [-1, 0, 1], "diffusivities": [1, 1], "conductivities": [1, 1],
                       "stefan_numbers": [0, 0]})"),
            "stefan_numbers");
  EXPECT_EQ(key_of(R"({"temperatures": [-1, 0, 1], "diffusivities": [1, 1], "conductivities": [1, 1],
                       "stefan_numbers": [0], "solver": {"max_iter": 1.5}})"),
            "solver.max_iter");
  EXPECT_EQ(key_of(R"({"temperatures": [-1, 0, 1], "diffusivities": [1, 1], "conductivities": [1, 1],
                       "stefan_numbers": [0], "solver": {"grad_tol": -1}})"),
            "solver");
  EXPECT_EQ(key_of("{ not json"), "config");
  EXPECT_EQ(key_of("[1, 2]"), "config");
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(stefan::format_number(0.0), "0.0");
  EXPECT_EQ(stefan::format_number(2.0), "2.0");
  EXPECT_EQ(stefan::format_number(-1.5), "-1.5");
  EXPECT_EQ(stefan::format_number(0.1), "0.1");
  EXPECT_EQ(stefan::format_number(1e-20), "1e-20");
  for (double v : {0.1 + 0.2, 1.0 / 3.0, -2.718281828459045, 6.02214076e23, 5e-324}) {
    const auto s = stefan::format_number(v);
    double parsed = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), parsed);
    EXPECT_EQ(parsed, v) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
}

TEST(Commands, CheckExitCodes) {
  const auto sym = check(data("symmetric.json"));
  EXPECT_EQ(sym.code, 0);
  const auto doc = json::parse(sym.out);
  for (const char* key : {"S_upper", "S_lower", "convexity_margins", "coercive", "unique_solution_guaranteed"})
    EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_TRUE(doc["coercive"].get<bool>());

  const auto nc = check(data("noncoercive.json"));
  EXPECT_EQ(nc.code, 2);
  EXPECT_FALSE(json::parse(nc.out)["coercive"].get<bool>());

  const auto missing = check(data("does_not_exist.json"));
  EXPECT_EQ(missing.code, 1);
  EXPECT_FALSE(missing.err.empty());
}

TEST_F(CommandFiles, CheckMildlyNegativeStefanNumber) {
  const auto path = write("c.json", R"({"temperatures": [-1, 0, 1], "diffusivities": [1, 1],
    "conductivities": [1, 1], "stefan_numbers": [-0.4]})");
  const auto r = check(path);
  EXPECT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["coercive"].get<bool>());
  EXPECT_TRUE(doc["unique_solution_guaranteed"].get<bool>());
}

TEST_F(CommandFiles, CheckMissingKey) {
  const auto path = write("c.json", R"({"temperatures": [-1, 0, 1], "diffusivities": [1, 1],
    "stefan_numbers": [0]})");
  const auto r = check(path);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("conductivities"), std::string::npos) << r.err;
}

TEST(Commands, SolveSymmetric) {
  const auto r = solve(data("symmetric.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["status"], "Converged");
  ASSERT_EQ(doc["xi_star"].size(), 1u);
  EXPECT_NEAR(doc["xi_star"][0].get<double>(), 0.0, 1e-10);
  for (const char* key : {"energy", "grad_norm", "iterations", "residuals", "check"})
    EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_EQ(doc["residuals"]["max_interface_jump"].get<double>(), 0.0);
}

TEST(Commands, SolveNonCoercive) {
  const auto r = solve(data("noncoercive.json"));
  EXPECT_EQ(r.code, 3);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["status"], "Diverged");
  EXPECT_TRUE(doc["xi_star"].is_null());
}

TEST(Commands, SolveTwoFrontsMatchesGrid) {
  const auto r = solve(data("two_fronts.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  const auto config = stefan::load_config(data("two_fronts.json"));
  const auto grid = stefan::oracle_gridsearch(config.spec, {{-3.0, 3.0}, {-3.0, 3.0}}, 301);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_LE(std::abs(doc["xi_star"][i].get<double>() - grid.point[i]), 6.0 / 300.0);
  // reported xi_star reproduces the solver's doubles exactly
  const auto direct = stefan::minimize(config.spec, config.solver);
  EXPECT_EQ(doc["xi_star"].get<std::vector<double>>(), direct.xi_star->vector());
}

TEST(Commands, SolveOverrides) {
  const auto limited = solve(data("two_fronts.json"), {std::nullopt, 1});
  EXPECT_EQ(limited.code, 4);
  EXPECT_EQ(json::parse(limited.out)["status"], "MaxIterations");
  const auto bad = solve(data("two_fronts.json"), {-1.0, std::nullopt});
  EXPECT_EQ(bad.code, 1);
}

TEST_F(CommandFiles, ProfileSymmetric) {
  stefan::cli::ProfileRequest request;
  request.t = 1.0;
  request.x_min = -5.0;
  request.x_max = 5.0;
  request.samples = 11;
  request.out = (dir_ / "profile.csv").string();
  const auto r = profile(data("symmetric.json"), request);
  ASSERT_EQ(r.code, 0) << r.err;

  const auto rows = lines_of(dir_ / "profile.csv");
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "x,xi,u");
  EXPECT_EQ(rows[6], "0.0,0.0,0.0");
  EXPECT_EQ(rows[1].substr(0, 10), "-5.0,-5.0,");
  EXPECT_EQ(rows[11].substr(0, 8), "5.0,5.0,");

  const auto fronts = lines_of(dir_ / "fronts.csv");
  ASSERT_EQ(fronts.size(), 2u);
  EXPECT_EQ(fronts[0], "i,xi,x_at_t");
  EXPECT_EQ(fronts[1], "1,0.0,0.0");
}

TEST_F(CommandFiles, ProfileFrontsScaleWithRootT) {
  const auto fronts_at = [&](double t) {
    stefan::cli::ProfileRequest request;
    request.t = t;
    request.samples = 5;
    request.out = (dir_ / "p.csv").string();
    EXPECT_EQ(profile(data("two_fronts.json"), request).code, 0);
    std::vector<double> x;
    const auto rows = lines_of(dir_ / "fronts.csv");
    for (std::size_t k = 1; k < rows.size(); ++k)
      x.push_back(std::stod(rows[k].substr(rows[k].rfind(',') + 1)));
    return x;
  };
  const auto one = fronts_at(1.0);
  const auto four = fronts_at(4.0);
  ASSERT_EQ(one.size(), 2u);
  ASSERT_EQ(four.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_EQ(four[i], 2.0 * one[i]);
}

TEST_F(CommandFiles, ProfileInputErrors) {
  stefan::cli::ProfileRequest request;
  request.out = (dir_ / "no_such_dir" / "p.csv").string();
  EXPECT_EQ(profile(data("symmetric.json"), request).code, 1);
  request.out = (dir_ / "p.csv").string();
  request.t = 0.0;
  EXPECT_EQ(profile(data("symmetric.json"), request).code, 1);
  request.t = 1.0;
  request.samples = 1;
  EXPECT_EQ(profile(data("symmetric.json"), request).code, 1);
  request.samples = 3;
  EXPECT_EQ(profile(data("noncoercive.json"), request).code, 3);
}

TEST(Commands, DumpRoundTrip) {
  std::ostringstream out, err;
  ASSERT_EQ(stefan::cli::run_dump(data("two_fronts.json"), out, err), 0);
  const auto reparsed = stefan::parse_config(json::parse(out.str()));
  const auto original = stefan::load_config(data("two_fronts.json"));
  EXPECT_EQ(reparsed.spec, original.spec);
  EXPECT_EQ(reparsed.solver, original.solver);
}

}  // namespace
