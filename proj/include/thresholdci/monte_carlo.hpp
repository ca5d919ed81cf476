#pragma once

// Seeded Monte Carlo simulation of the regression model.
//
// Randomness comes from a counter-based generator (Philox 4x32, 10 rounds).
// Replication r draws from its own stream keyed by (seed, r), so results do
// not depend on how replications are split across threads.
//
// The default path draws theta_LS_i ~ N(theta_i, sigma^2 xi^2 / n) and
// (n - k) sigma_hat^2 / sigma^2 ~ chi2_{n-k} independently. When the plan
// carries a design matrix the full model y = X theta + u is simulated and
// fitted instead.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "thresholdci/coverage.hpp"
#include "thresholdci/execution.hpp"
#include "thresholdci/finite_distribution.hpp"
#include "thresholdci/model.hpp"
#include "thresholdci/thresholding.hpp"

namespace thresholdci {

/// Philox 4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Sequential draws from the Philox stream with key `seed` and stream id
/// `stream`.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  /// Uniform on (0, 1), 53-bit resolution, never exactly 0 or 1.
  double uniform();
  /// Standard normal by the Box-Muller transform.
  double normal();
  /// Chi-squared with m degrees of freedom.
  double chi_square(DegreesOfFreedom m);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::optional<double> spare_normal_;
};

struct SimulationPlan {
  ProblemSetup setup;
  Eigen::VectorXd theta;  // length k; component setup.component_index is the target
  std::int64_t reps = 100000;
  std::uint64_t seed = 1;
  std::optional<DesignMatrix> design;  // full-model simulation when present

  /// Plan for the structural path with theta_i at the target component and
  /// zeros elsewhere.
  static SimulationPlan synthetic(const ProblemSetup& setup, double theta_i, std::int64_t reps,
                                  std::uint64_t seed);
  /// Throws DomainError on inconsistent dimensions or reps < 1. A design
  /// matrix must have n rows, k columns and xi_i equal to setup.xi.
  void validate() const;
  double target_theta() const;
};

struct CoverageEstimate {
  double coverage = 0.0;
  double std_error = 0.0;  // binomial standard error
  std::int64_t hits = 0;
  std::int64_t reps = 0;
};

/// Fraction of replications whose interval contains theta_i. Estimated
/// intervals scale by sigma_hat, known ones by sigma.
CoverageEstimate simulate_coverage(const SimulationPlan& plan, EstimatorKind kind, const IntervalSpec& spec,
                                   Execution exec = Execution::parallel);

/// Coverage of the least-squares interval theta_LS_i +/- c * half_length,
/// c = sigma or sigma_hat.
CoverageEstimate simulate_ls_coverage(const SimulationPlan& plan, double half_length, VarianceMode mode,
                                      Execution exec = Execution::parallel);

/// Draws of sigma_hat^{-1} alpha (theta_tilde_i - theta_i), one per
/// replication, in replication order.
std::vector<double> simulate_scaled_errors(const SimulationPlan& plan, EstimatorKind kind,
                                           ScalingFactor alpha, Execution exec = Execution::parallel);

/// Draws of (n - k) sigma_hat^2 / sigma^2.
std::vector<double> simulate_variance_ratio(const SimulationPlan& plan, Execution exec = Execution::parallel);

struct EmpiricalCdf {
  std::vector<double> grid;
  std::vector<double> values;  // fraction of draws <= grid point
  double zero_mass = 0.0;      // fraction of draws exactly 0
  std::int64_t reps = 0;
};

/// Empirical CDF of the scaled error on a grid.
EmpiricalCdf simulate_scaled_error_ecdf(const SimulationPlan& plan, EstimatorKind kind, ScalingFactor alpha,
                                        const std::vector<double>& grid, Execution exec = Execution::parallel);

/// max over grid points x of |ecdf(x) - F(x)| and |ecdf(x-) - F(x)|, for a
/// continuous F given by its values on the grid. `sorted_draws` must be
/// sorted ascending.
double ks_distance_on_grid(const std::vector<double>& sorted_draws, const std::vector<double>& grid,
                           const std::vector<double>& cdf_values);

}  // namespace thresholdci
