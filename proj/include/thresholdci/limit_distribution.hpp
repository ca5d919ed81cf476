#pragma once

// Limits of the law of sigma_hat^{-1} alpha (theta_tilde_i - theta_i) along
// moving parameters.
//
// Conservative tuning (sqrt(n) eta -> e < inf, alpha = sqrt(n)/xi) with
// n - k -> m finite: the limit has the finite-sample form with
// sqrt(n) theta / (sigma xi) -> nu and sqrt(n) eta -> e.
//
// Consistent tuning (sqrt(n) eta -> inf, alpha = 1/(xi eta)) with
// theta / (sigma xi eta) -> zeta: chi-squared mixtures on [-1, 1] for finite
// m, point masses when n - k -> inf.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "thresholdci/finite_distribution.hpp"
#include "thresholdci/model.hpp"
#include "thresholdci/quadrature.hpp"
#include "thresholdci/thresholding.hpp"

namespace thresholdci {

struct ConservativeRegime {
  double nu = 0.0;  // may be +/-inf
  double e = 0.0;
  DegreesOfFreedom m{1};

  void validate() const;
};

/// Limits (f, r, s) needed by hard thresholding when |zeta| = 1 and
/// n - k -> inf. f may be +inf, r and s may be +/-inf.
struct HardBoundaryAux {
  double f = 0.0;
  double r = 0.0;
  double s = 0.0;
};

struct ConsistentRegime {
  double zeta = 0.0;                   // may be +/-inf
  std::optional<DegreesOfFreedom> m;   // empty: n - k -> inf
  std::optional<HardBoundaryAux> hard_aux;
};

/// Limit CDF under conservative tuning. Closed forms for e = 0, |nu| = inf
/// and nu = 0; quadrature otherwise.
double conservative_limit_cdf(EstimatorKind kind, double x, const ConservativeRegime& regime,
                              const QuadratureConfig& cfg = {});

/// Limit CDF under consistent tuning. Throws DomainError for hard
/// thresholding with m = inf and |zeta| = 1 when hard_aux is missing.
double consistent_limit_cdf(EstimatorKind kind, double x, const ConsistentRegime& regime);

/// Weight w(f, r, s) of the point mass at -zeta in the hard-thresholding
/// boundary case: Phi(r) for f = 0, Phi(sqrt(2) s) for f = inf, and
/// int Phi(f t / sqrt(2) + r) phi(t) dt in between.
double hard_boundary_weight(double f, double r, double s);

using LimitRegime = std::variant<ConservativeRegime, ConsistentRegime>;

/// Limit CDF for either regime.
double limit_cdf(EstimatorKind kind, double x, const LimitRegime& regime);

/// Locations where the limit may have atoms: 0, +/-zeta, +/-1, +/-1/zeta
/// (finite ones) under consistent tuning, 0 under conservative tuning.
std::vector<double> limit_atom_candidates(const LimitRegime& regime);

struct PathPoint {
  ProblemSetup setup;
  double theta = 0.0;
};

/// Conservative-tuning path with k = n - m, sqrt(n) eta_n = e + 2/sqrt(n) and
/// sqrt(n) theta_n / (sigma xi) = nu + 1/sqrt(n) (sigma = xi = 1). Finite nu
/// only.
std::vector<PathPoint> conservative_path(double nu, double e, DegreesOfFreedom m, const std::vector<std::int64_t>& ns);

/// Consistent-tuning path with eta_n = n^{-eta_power} and theta_n = zeta eta_n
/// (sigma = xi = 1); k = n - m, or k = n / 2 when m is empty.
std::vector<PathPoint> consistent_path(double zeta, std::optional<DegreesOfFreedom> m,
                                       const std::vector<std::int64_t>& ns, double eta_power = 1.0 / 6.0);

struct GapReport {
  std::vector<std::int64_t> n;
  std::vector<double> gap;  // max |F_n - F| over the retained grid points
  int points_used = 0;
  double final_gap() const { return gap.empty() ? 0.0 : gap.back(); }
};

/// Distance between the finite-sample CDFs along a path and the limit CDF,
/// over grid points at least `exclusion` away from every atom candidate.
/// The scaling follows the regime: sqrt(n)/xi (conservative) or 1/(xi eta)
/// (consistent).
GapReport weak_convergence_gap(EstimatorKind kind, const std::vector<PathPoint>& path, const LimitRegime& regime,
                               const std::vector<double>& grid, double exclusion = 0.05,
                               Execution exec = Execution::parallel);

}  // namespace thresholdci
