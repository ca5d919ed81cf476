#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "thresholdci/coverage.hpp"
#include "thresholdci/errors.hpp"
#include "thresholdci/finite_distribution.hpp"

using namespace thresholdci;
using namespace thresholdci::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

RunConfig config_for(Command c) {
  RunConfig cfg;
  cfg.command = c;
  return cfg;
}

}  // namespace

TEST_CASE("number formatting uses 10 significant digits") {
  CHECK(format_number(0.1234567890123) == "0.123456789");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1e-12) == "1e-12");
}

TEST_CASE("table1 layout and reference cells") {
  const Artifact a = cmd_table1(config_for(Command::table1));
  const auto rows = parse_csv(a.text);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"estimator", "eta", "length", "lower_bound", "actual_min_coverage",
                                            "upper_bound", "minimizer_theta"});
  CHECK(rows[1][0] == "ls");
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.406).epsilon(5e-4 / 0.406));
  CHECK(std::stod(rows[1][3]) == doctest::Approx(0.95).epsilon(1e-10));
  CHECK(rows[2][0] == "hard");
  CHECK(std::stod(rows[2][2]) == doctest::Approx(0.434).epsilon(5e-4 / 0.434));
  CHECK(std::stod(rows[3][2]) == doctest::Approx(0.823).epsilon(5e-4 / 0.823));
  CHECK(rows[4][0] == "asoft");
  CHECK(std::stod(rows[4][5]) == doctest::Approx(0.9591).epsilon(1e-3));
  CHECK(std::stod(rows[5][5]) == doctest::Approx(0.9965).epsilon(1e-3));
}

TEST_CASE("table1 --fast leaves the search cells empty") {
  RunConfig cfg = config_for(Command::table1);
  cfg.fast = true;
  const auto rows = parse_csv(cmd_table1(cfg).text);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 7);
    CHECK(rows[r][4].empty());
    CHECK(rows[r][6].empty());
  }
}

TEST_CASE("table1 json and check mode") {
  RunConfig cfg = config_for(Command::table1);
  cfg.format = Format::json;
  cfg.fast = true;
  cfg.check = true;
  const Artifact a = cmd_table1(cfg);
  const auto doc = nlohmann::json::parse(a.text);
  CHECK(doc["rows"].size() == 5);
  CHECK(doc["rows"][0]["eta"].is_null());
  CHECK(a.diagnostics.find("check hard eta=0.05 length") != std::string::npos);
  cfg.n = 50;
  CHECK_THROWS_AS(cmd_table1(cfg), DomainError);
}

TEST_CASE("table1 is byte identical across runs") {
  RunConfig cfg = config_for(Command::table1);
  cfg.reps = 20000;
  CHECK(cmd_table1(cfg).text == cmd_table1(cfg).text);
}

TEST_CASE("pdf figure at theta = 0") {
  RunConfig cfg = config_for(Command::figure);
  cfg.figure_id = "pdfH";
  const auto rows = parse_csv(cmd_figure(cfg).text);
  REQUIRE(rows.size() == 802);
  CHECK(rows[0] == std::vector<std::string>{"x", "density", "atom_mass"});
  CHECK(rows[1][0] == "-4");
  CHECK(rows[801][0] == "4");
  const double mass = atom_mass(ProblemSetup::reference());
  const double band = std::sqrt(40.0) * 0.05;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(std::stod(rows[r][2]) == doctest::Approx(mass).epsilon(1e-9));
    if (std::abs(std::stod(rows[r][0])) < band) CHECK(std::stod(rows[r][1]) == 0.0);
  }
  cfg.figure_id = "pdfAS";
  cfg.theta = 0.16;
  const auto shifted = parse_csv(cmd_figure(cfg).text);
  CHECK(std::stod(shifted[1][2]) == 0.0);
}

TEST_CASE("coverage figure minimum matches the table") {
  RunConfig cfg = config_for(Command::figure);
  cfg.figure_id = "coverageH";
  const auto rows = parse_csv(cmd_figure(cfg).text);
  REQUIRE(rows.size() == 302);
  CHECK(rows[1][0] == "0");
  CHECK(rows[301][0] == "3");
  double lo = 1.0;
  for (std::size_t r = 1; r < rows.size(); ++r) lo = std::min(lo, std::stod(rows[r][1]));
  const ProblemSetup s = ProblemSetup::reference();
  const double a = solve_unknown_half_length(EstimatorKind::hard, 0.05, s);
  const double table = min_coverage_search(EstimatorKind::hard, IntervalSpec::estimated(a), s).coverage;
  CHECK(std::abs(lo - table) <= 2e-3);
  cfg.figure_id = "nope";
  CHECK_THROWS_AS(cmd_figure(cfg), DomainError);
}

TEST_CASE("interval command") {
  RunConfig cfg = config_for(Command::interval);
  cfg.kind = EstimatorKind::soft;
  cfg.mode = VarianceMode::known;
  const auto doc = nlohmann::json::parse(cmd_interval(cfg).text);
  for (const char* key : {"kind", "mode", "alpha", "half_length", "lower_bound", "upper_bound"}) CHECK(doc.contains(key));
  CHECK(doc["kind"] == "soft");
  CHECK(doc["half_length"].get<double>() ==
        doctest::Approx(solve_known_half_length(EstimatorKind::soft, 0.05, ProblemSetup::reference())));
  CHECK(doc["lower_bound"].get<double>() == doctest::Approx(0.95).epsilon(1e-10));

  RunConfig est = config_for(Command::interval);
  est.kind = EstimatorKind::hard;
  est.eta = 0.5;
  est.fast = true;
  const auto h = nlohmann::json::parse(cmd_interval(est).text);
  CHECK(h["half_length"].get<double>() == doctest::Approx(0.823).epsilon(5e-4 / 0.823));
  CHECK(h["min_coverage"].is_null());

  est.alpha = 1.5;
  CHECK_THROWS_AS(cmd_interval(est), DomainError);
  est.alpha = 0.05;
  est.a = 0.5;
  est.d = 1.0;
  CHECK_THROWS_AS(cmd_interval(est), DomainError);
}

TEST_CASE("coverage curve command") {
  RunConfig cfg = config_for(Command::coverage_curve);
  cfg.kind = EstimatorKind::adaptive_soft;
  cfg.a = 0.5;
  cfg.theta = 1.5;
  cfg.reps = 2000;
  const auto rows = parse_csv(cmd_coverage_curve(cfg).text);
  REQUIRE(rows.size() == 302);
  CHECK(rows[0] == std::vector<std::string>{"theta", "coverage", "mc_coverage", "mc_stderr"});
  CHECK(rows[301][0] == "1.5");
  CHECK(cmd_coverage_curve(cfg).text == cmd_coverage_curve(cfg).text);
}

TEST_CASE("limit check report schema") {
  RunConfig cfg = config_for(Command::limit_check);
  cfg.kind = EstimatorKind::soft;
  cfg.fast = true;
  const Artifact a = cmd_limit_check(cfg);
  const auto doc = nlohmann::json::parse(a.text);
  CHECK(doc["threshold"] == 0.02);
  REQUIRE(doc["suites"].size() == 7);
  for (const auto& s : doc["suites"]) {
    CHECK(s["n"].size() == 3);
    CHECK(s["gap"].size() == 3);
    CHECK(s["kind"] == "soft");
  }
  CHECK(a.ok == doc["all_pass"].get<bool>());
}

TEST_CASE("check flag is table1 only") {
  RunConfig cfg = config_for(Command::interval);
  cfg.check = true;
  CHECK_THROWS_AS(run_command(cfg), DomainError);
}
