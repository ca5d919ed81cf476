#pragma once

// Finite-sample law of the studentised estimation error
//     sigma_hat^{-1} * alpha * (theta_tilde_i - theta_i)
// for the three thresholding estimators with estimated variance.
//
// All three laws share one standardised form. With S ~ rho_m independent of
// the least-squares estimate, and writing nu = sqrt(n) theta_i / (sigma xi),
// e = sqrt(n) eta, the CDF at standardised abscissa x is
//     F(x) = int_0^inf Phi(G(x s + nu, s e) - nu) rho_m(s) ds,
// where G(y, c) = sup{z : kernel(z, c) <= y} is the upper inverse of the
// thresholding kernel. The finite-sample law is F at x * sqrt(n) / (alpha xi);
// the conservative-tuning limit is F with (nu, e, m) replaced by their limits.

#include <vector>

#include "thresholdci/execution.hpp"
#include "thresholdci/model.hpp"
#include "thresholdci/quadrature.hpp"
#include "thresholdci/thresholding.hpp"

namespace thresholdci {

/// Non-random scaling factor alpha > 0 applied to the estimation error.
class ScalingFactor {
 public:
  explicit ScalingFactor(double alpha);
  /// sqrt(n) / xi, the rate under conservative tuning.
  static ScalingFactor conservative(const ProblemSetup& setup);
  /// 1 / (xi eta), the rate under consistent tuning.
  static ScalingFactor consistent(const ProblemSetup& setup);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// Standardised law F described above. Immutable.
class StandardizedLaw {
 public:
  StandardizedLaw(EstimatorKind kind, double nu, double e, DegreesOfFreedom m,
                  QuadratureConfig cfg = {});

  /// Right-continuous CDF; x = +/-inf gives 1/0.
  double cdf(double x) const;
  /// Density of the absolutely continuous part (0 at the atom location).
  double density(double x) const;
  /// Mass of the atom at 0 (only nu == 0 has one): T_m(e) - T_m(-e).
  double atom_mass() const;

  EstimatorKind kind() const noexcept { return kind_; }
  double nu() const noexcept { return nu_; }
  double e() const noexcept { return e_; }
  DegreesOfFreedom m() const noexcept { return m_; }

 private:
  std::vector<double> breakpoints(double x) const;

  EstimatorKind kind_;
  double nu_;
  double e_;
  DegreesOfFreedom m_;
  QuadratureConfig cfg_;
};

/// Law of sigma_hat^{-1} alpha (theta_tilde_i - theta_i): an atom at 0 plus
/// an absolutely continuous part. Immutable and shareable across threads.
class MixedDistribution {
 public:
  MixedDistribution(EstimatorKind kind, const ProblemSetup& setup, double theta_i, ScalingFactor alpha,
                    QuadratureConfig cfg = {});

  double cdf(double x) const;
  double density(double x) const;
  double atom_mass() const;
  const StandardizedLaw& standardized() const noexcept { return law_; }

 private:
  StandardizedLaw law_;
  double x_scale_;  // sqrt(n) / (alpha xi)
};

double tilde_cdf(EstimatorKind kind, double x, const ProblemSetup& setup, double theta_i,
                 ScalingFactor alpha);
double tilde_density(EstimatorKind kind, double x, const ProblemSetup& setup, double theta_i,
                     ScalingFactor alpha);
/// P(theta_tilde_i = 0 | theta_i = 0) = T_{n-k}(sqrt(n) eta) - T_{n-k}(-sqrt(n) eta).
double atom_mass(const ProblemSetup& setup);

/// max over the grid of |F_theta(x) - (1 - F_{-theta}(-x))|. For theta = 0
/// the point x = 0 (the atom) is skipped.
double mirror_check(EstimatorKind kind, const ProblemSetup& setup, double theta_i, ScalingFactor alpha,
                    const std::vector<double>& grid);

struct DensitySeries {
  std::vector<double> x;
  std::vector<double> density;
  double atom_mass = 0.0;
};

/// Uniform grid of `points` abscissae over [lo, hi] with the density of the
/// continuous part at each.
DensitySeries sample_density(const MixedDistribution& dist, double lo, double hi, int points,
                             Execution exec = Execution::parallel);

/// CDF values on an arbitrary grid.
std::vector<double> sample_cdf(const MixedDistribution& dist, const std::vector<double>& grid,
                               Execution exec = Execution::parallel);

}  // namespace thresholdci
