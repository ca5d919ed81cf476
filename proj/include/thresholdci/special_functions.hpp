#pragma once

// Standard normal, Student-t, chi-squared and scaled-chi special functions.
//
// Every routine is a pure function of its arguments. Arguments are extended
// reals where noted: +/-infinity are accepted and map to the limiting values
// (Phi(-inf) = 0, Phi(inf) = 1, and likewise for T_m).

#include <cstdint>

namespace thresholdci {

/// Degrees of freedom m of a t or chi-squared law; m >= 1.
class DegreesOfFreedom {
 public:
  explicit DegreesOfFreedom(std::int64_t m);
  std::int64_t value() const noexcept { return m_; }
  double as_double() const noexcept { return static_cast<double>(m_); }
  friend bool operator==(DegreesOfFreedom, DegreesOfFreedom) = default;

 private:
  std::int64_t m_;
};

// Normal law.
double normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate far into the right tail.
double normal_sf(double x);
double normal_pdf(double x);
double normal_quantile(double p);
/// Phi(hi) - Phi(lo) without cancellation when both arguments sit in the
/// same tail. Returns a negative number when hi < lo.
double normal_prob_between(double lo, double hi);

// rho_m: density of sqrt(chi2_m / m).
double rho_density(double s, DegreesOfFreedom m);
double log_rho_density(double s, DegreesOfFreedom m);

/// rho_m with its normalising constant computed once; for integrand loops.
class RhoDensity {
 public:
  explicit RhoDensity(DegreesOfFreedom m);
  double operator()(double s) const;
  DegreesOfFreedom m() const noexcept { return m_; }

 private:
  DegreesOfFreedom m_;
  double log_norm_;
};

// Student t.
double t_cdf(double x, DegreesOfFreedom m);
double t_pdf(double x, DegreesOfFreedom m);
double t_quantile(double p, DegreesOfFreedom m);
/// T_m(hi) - T_m(lo), tail-aware like normal_prob_between.
double t_prob_between(double lo, double hi, DegreesOfFreedom m);

// Chi-squared. Negative x is a DomainError; x = +inf gives 1.
double chi_sq_cdf(double x, DegreesOfFreedom m);
double chi_sq_sf(double x, DegreesOfFreedom m);
double chi_sq_quantile(double p, DegreesOfFreedom m);
/// Upper-tail quantile: the x with P(chi2_m > x) = q.
double chi_sq_upper_quantile(double q, DegreesOfFreedom m);

}  // namespace thresholdci
