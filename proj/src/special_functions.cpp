#include "thresholdci/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "thresholdci/errors.hpp"

namespace thresholdci {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210484903928;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438186848;

}  // namespace

DegreesOfFreedom::DegreesOfFreedom(std::int64_t m) : m_(m) {
  if (m < 1) throw DomainError("degrees of freedom must be >= 1");
}

double normal_cdf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_sf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double normal_pdf(double x) {
  if (std::isinf(x)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("normal_quantile: p outside [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_prob_between(double lo, double hi) {
  if (lo > 0.0) return normal_sf(lo) - normal_sf(hi);
  return normal_cdf(hi) - normal_cdf(lo);
}

namespace {

// log of the s-free factor of rho_m; f_S(s) = f_{chi2}(m s^2) * 2 m s.
double log_rho_norm(DegreesOfFreedom m) {
  const double md = m.as_double();
  const double half = 0.5 * md;
  return std::numbers::ln2 + half * std::log(md) - half * std::numbers::ln2 - std::lgamma(half);
}

}  // namespace

double log_rho_density(double s, DegreesOfFreedom m) {
  if (!(s > 0.0) || std::isinf(s)) return -std::numeric_limits<double>::infinity();
  const double md = m.as_double();
  return log_rho_norm(m) + (md - 1.0) * std::log(s) - 0.5 * md * s * s;
}

RhoDensity::RhoDensity(DegreesOfFreedom m) : m_(m), log_norm_(log_rho_norm(m)) {}

double RhoDensity::operator()(double s) const {
  if (!(s > 0.0) || std::isinf(s)) return 0.0;
  const double md = m_.as_double();
  return std::exp(log_norm_ + (md - 1.0) * std::log(s) - 0.5 * md * s * s);
}

double rho_density(double s, DegreesOfFreedom m) {
  if (!(s > 0.0) || std::isinf(s)) return 0.0;
  return std::exp(log_rho_density(s, m));
}

double t_cdf(double x, DegreesOfFreedom m) {
  if (std::isnan(x)) return x;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(m.as_double()), x);
}

double t_pdf(double x, DegreesOfFreedom m) {
  if (std::isinf(x)) return 0.0;
  return boost::math::pdf(boost::math::students_t_distribution<double>(m.as_double()), x);
}

double t_quantile(double p, DegreesOfFreedom m) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("t_quantile: p outside [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::students_t_distribution<double>(m.as_double()), p);
}

double t_prob_between(double lo, double hi, DegreesOfFreedom m) {
  if (lo > 0.0) return t_cdf(-lo, m) - t_cdf(-hi, m);
  return t_cdf(hi, m) - t_cdf(lo, m);
}

double chi_sq_cdf(double x, DegreesOfFreedom m) {
  if (std::isnan(x) || x < 0.0) throw DomainError("chi_sq_cdf: negative argument");
  if (std::isinf(x)) return 1.0;
  if (x == 0.0) return 0.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(m.as_double()), x);
}

double chi_sq_sf(double x, DegreesOfFreedom m) {
  if (std::isnan(x) || x < 0.0) throw DomainError("chi_sq_sf: negative argument");
  if (std::isinf(x)) return 0.0;
  if (x == 0.0) return 1.0;
  return boost::math::cdf(
      boost::math::complement(boost::math::chi_squared_distribution<double>(m.as_double()), x));
}

double chi_sq_quantile(double p, DegreesOfFreedom m) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("chi_sq_quantile: p outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(m.as_double()), p);
}

double chi_sq_upper_quantile(double q, DegreesOfFreedom m) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("chi_sq_upper_quantile: q outside [0, 1]");
  if (q == 1.0) return 0.0;
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(
      boost::math::complement(boost::math::chi_squared_distribution<double>(m.as_double()), q));
}

}  // namespace thresholdci
