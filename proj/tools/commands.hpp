#pragma once

// Command implementations behind the thresholdci executable. Each command
// renders its artifact into a string so tests can compare runs directly.

#include <cstdint>
#include <optional>
#include <string>

#include "thresholdci/model.hpp"
#include "thresholdci/thresholding.hpp"

namespace thresholdci::cli {

enum class Command { table1, figure, interval, coverage_curve, limit_check };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::table1;
  std::int64_t n = 40;
  std::int64_t k = 35;
  double eta = 0.05;
  double xi = 1.0;
  double sigma = 1.0;
  double alpha = 0.05;
  std::optional<EstimatorKind> kind;
  VarianceMode mode = VarianceMode::estimated;
  std::optional<double> theta;
  std::optional<double> a;
  std::optional<double> d;
  std::uint64_t seed = 1;
  std::int64_t reps = 0;
  std::string out;
  std::optional<Format> format;
  bool check = false;
  bool fast = false;
  std::string figure_id;  // figure command only

  ProblemSetup setup() const;
  /// Throws DomainError on invalid parameter combinations.
  void validate() const;
};

struct Artifact {
  std::string text;
  bool ok = true;           // false: --check mismatch or a gap above threshold
  std::string diagnostics;  // written to stderr
};

Artifact cmd_table1(const RunConfig& config);
Artifact cmd_figure(const RunConfig& config);
Artifact cmd_interval(const RunConfig& config);
Artifact cmd_coverage_curve(const RunConfig& config);
Artifact cmd_limit_check(const RunConfig& config);

Artifact run_command(const RunConfig& config);

/// Number formatting shared by every CSV artifact: 10 significant digits.
std::string format_number(double value);

}  // namespace thresholdci::cli
