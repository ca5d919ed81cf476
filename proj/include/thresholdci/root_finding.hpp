#pragma once

#include <functional>

namespace thresholdci {

/// Brent's bracketed root finder. Requires f(lo) * f(hi) <= 0 (DomainError
/// otherwise) and returns x* with a final bracket no wider than about tol.
/// Deterministic: identical inputs give bit-identical output. Throws
/// NumericalFailure if max_iterations is exhausted.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10,
                 int max_iterations = 200);

/// Golden-section search for the minimiser of f on [lo, hi]; returns the
/// abscissa. Ties resolve toward the smaller abscissa.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol);

}  // namespace thresholdci
