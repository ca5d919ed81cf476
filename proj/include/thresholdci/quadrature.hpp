#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature.
//
// Callers pass the points where their integrand switches branch (indicator
// jumps, kinks) as breakpoints; each becomes a panel boundary so no panel
// straddles a discontinuity. integrate_halfline is specialised for the
// rho_m-weighted integrals over (0, inf) that appear throughout the library:
// it truncates the half line where the remaining rho_m mass drops below
// tail_mass_tol and seeds panels around the bulk of rho_m.

#include <functional>
#include <span>
#include <vector>

#include "thresholdci/special_functions.hpp"

namespace thresholdci {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  double tail_mass_tol = 1e-12;

  /// Throws DomainError unless every tolerance is strictly positive.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error, truncation included
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Integral over [a, b] (finite or infinite endpoints). Throws
/// NumericalFailure when max_subdivisions is exhausted before the tolerance
/// is met.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureConfig& cfg = {});

/// The interval of (0, inf) holding all but tail_mass of rho_m, together
/// with interior panel points spread over its bulk.
struct RhoSupport {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> panel_points;
};
RhoSupport rho_support(DegreesOfFreedom m, double tail_mass);

/// Integral over (0, inf) of an integrand dominated by a bounded multiple of
/// rho_m (the usual "E[g(S)], S ~ rho_m" shape, with f = g * rho_m).
QuadratureResult integrate_halfline(const Integrand& f, DegreesOfFreedom m,
                                    std::span<const double> breakpoints = {},
                                    const QuadratureConfig& cfg = {});

}  // namespace thresholdci
