#pragma once

// Coverage of confidence intervals built around the thresholding estimators.
//
// Known variance: [theta_hat_i - sigma a, theta_hat_i + sigma b].
// Estimated variance: [theta_tilde_i - sigma_hat a, theta_tilde_i + sigma_hat a].
// Every coverage probability depends on (theta_i, sigma) only through
// theta_i / sigma, so the infimal quantities are computed at sigma = 1.

#include <optional>
#include <vector>

#include "thresholdci/execution.hpp"
#include "thresholdci/model.hpp"
#include "thresholdci/quadrature.hpp"
#include "thresholdci/thresholding.hpp"

namespace thresholdci {

struct IntervalSpec {
  double a = 0.0;  // lower half-length
  double b = 0.0;  // upper half-length
  VarianceMode mode = VarianceMode::known;

  static IntervalSpec known(double a, double b);
  static IntervalSpec known_symmetric(double a) { return known(a, a); }
  static IntervalSpec estimated(double a);

  /// a, b finite and >= 0; estimated intervals must be symmetric.
  void validate() const;
};

struct CoverageReport {
  double analytic = 0.0;  // minimal coverage over theta
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  std::optional<double> minimizer_theta;  // absent when the minimum is the theta -> inf limit
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
};

/// P(theta_i in [theta_hat_i - sigma a, theta_hat_i + sigma b]) with known
/// sigma, in closed form from the normal law of the least-squares estimate.
double known_coverage(EstimatorKind kind, double theta_i, double sigma, const IntervalSpec& spec,
                      const ProblemSetup& setup);

struct BoundValue {
  double value = 0.0;
  bool exact = false;    // true when the value is the infimal coverage itself
  bool clamped = false;  // the formula went negative and was clamped to 0
};

/// Infimum over theta of known_coverage, in closed form; negative branch
/// values are clamped to 0.
double infimal_known_coverage(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup);
/// Same value with the clamping recorded.
BoundValue infimal_known_bound(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup);

/// Half-length a* of the shortest symmetric known-variance interval with
/// infimal coverage 1 - alpha (as a multiple of sigma).
double solve_known_half_length(EstimatorKind kind, double alpha, const ProblemSetup& setup);

/// Coverage of the estimated-variance interval: the known-variance coverage
/// at (a s, eta s) averaged over s ~ rho_{n-k}.
double unknown_coverage(EstimatorKind kind, double theta_i, double sigma, const IntervalSpec& spec,
                        const ProblemSetup& setup, const QuadratureConfig& cfg = {});

/// Lower bound on the infimal estimated-variance coverage. Exact for soft.
BoundValue lower_bound_unknown(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup);

/// T_{n-k}(sqrt(n) a / xi) - T_{n-k}(-sqrt(n) a / xi), an upper bound for
/// every kind.
double upper_bound_unknown(const IntervalSpec& spec, const ProblemSetup& setup);

/// Smallest a with lower_bound_unknown = 1 - alpha.
double solve_unknown_half_length(EstimatorKind kind, double alpha, const ProblemSetup& setup);

/// Limit of the coverage as theta_i -> +inf.
double coverage_at_infinity(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup);

struct SearchConfig {
  int grid_points = 201;
  double refine_tol = 1e-6;
  Execution execution = Execution::parallel;
  QuadratureConfig quadrature{};
};

struct MinCoverage {
  double coverage = 0.0;
  double theta = 0.0;
  bool at_infinity = false;  // the theta -> inf limit was smaller than any grid value
};

/// Minimum over theta_i >= 0 of the coverage (sigma = 1): a uniform grid on
/// [0, a + xi eta + 10 xi / sqrt(n)], golden-section refinement around the
/// best grid point, then the smaller of that and the theta -> inf limit.
/// Works for both variance modes.
MinCoverage min_coverage_search(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup,
                                const SearchConfig& cfg = {});

/// Coverage at each theta (sigma = 1).
std::vector<double> coverage_curve(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup,
                                   const std::vector<double>& thetas, Execution exec = Execution::parallel,
                                   const QuadratureConfig& cfg = {});

/// Infimal coverage of the interval with half-length d xi eta: exact for
/// known variance, lower_bound_unknown for estimated variance.
double simple_interval_infimal(EstimatorKind kind, double d, const ProblemSetup& setup, VarianceMode mode);

/// Bounds, minimal coverage and minimiser for an estimated-variance interval.
CoverageReport assess_interval(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup,
                               const SearchConfig& cfg = {});

}  // namespace thresholdci
