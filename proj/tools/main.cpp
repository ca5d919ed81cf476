#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "thresholdci/errors.hpp"

namespace {

using thresholdci::cli::Command;
using thresholdci::cli::Format;
using thresholdci::cli::RunConfig;

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void add_common_options(CLI::App* sub, RunConfig& config) {
  static const std::map<std::string, thresholdci::EstimatorKind> kinds{
      {"hard", thresholdci::EstimatorKind::hard},
      {"soft", thresholdci::EstimatorKind::soft},
      {"asoft", thresholdci::EstimatorKind::adaptive_soft}};
  static const std::map<std::string, thresholdci::VarianceMode> modes{
      {"known", thresholdci::VarianceMode::known}, {"estimated", thresholdci::VarianceMode::estimated}};
  static const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};

  sub->add_option("--n", config.n, "sample size")->capture_default_str();
  sub->add_option("--k", config.k, "number of regressors")->capture_default_str();
  sub->add_option("--eta", config.eta, "tuning parameter")->capture_default_str();
  sub->add_option("--xi", config.xi, "component scale xi")->capture_default_str();
  sub->add_option("--sigma", config.sigma, "error standard deviation")->capture_default_str();
  sub->add_option("--alpha", config.alpha, "one minus the confidence level")->capture_default_str();
  sub->add_option("--kind", config.kind, "estimator")->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  sub->add_option("--mode", config.mode, "variance mode")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  sub->add_option("--theta", config.theta, "parameter value (curve end for coverage_curve)");
  sub->add_option("--a", config.a, "interval half-length");
  sub->add_option("--d", config.d, "half-length as a multiple of xi*eta");
  sub->add_option("--seed", config.seed, "simulation seed")->capture_default_str();
  sub->add_option("--reps", config.reps, "Monte Carlo replications (0: none)")->capture_default_str();
  sub->add_option("--out", config.out, "output path (default: stdout)");
  sub->add_option("--format", config.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thresholding estimators: distributions and confidence intervals"};
  app.require_subcommand(1);
  RunConfig config;

  auto* table1 = app.add_subcommand("table1", "interval lengths, bounds and minimal coverages");
  add_common_options(table1, config);
  table1->add_flag("--check", config.check, "compare with the published values; exit 1 on mismatch");
  table1->add_flag("--fast", config.fast, "skip the minimal-coverage search");

  auto* figure = app.add_subcommand("figure", "figure data: pdfH, pdfS, pdfAS, coverageH, coverageAS");
  add_common_options(figure, config);
  figure->add_option("id", config.figure_id, "figure id")->required();

  auto* interval = app.add_subcommand("interval", "shortest interval and its coverage bounds");
  add_common_options(interval, config);
  interval->add_flag("--fast", config.fast, "skip the minimal-coverage search");

  auto* curve = app.add_subcommand("coverage_curve", "coverage as a function of theta");
  add_common_options(curve, config);

  auto* limit = app.add_subcommand("limit_check", "weak-convergence gaps to the limit laws");
  add_common_options(limit, config);
  limit->add_flag("--fast", config.fast, "coarser grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (table1->parsed()) config.command = Command::table1;
  if (figure->parsed()) config.command = Command::figure;
  if (interval->parsed()) config.command = Command::interval;
  if (curve->parsed()) config.command = Command::coverage_curve;
  if (limit->parsed()) config.command = Command::limit_check;

  try {
    const thresholdci::cli::Artifact artifact = thresholdci::cli::run_command(config);
    std::cerr << artifact.diagnostics;
    if (config.out.empty()) {
      std::cout << artifact.text;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      file << artifact.text;
      if (!file) {
        std::cerr << "error: cannot write " << config.out << '\n';
        return kExitUsage;
      }
    }
    return artifact.ok ? 0 : kExitMismatch;
  } catch (const thresholdci::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const thresholdci::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
