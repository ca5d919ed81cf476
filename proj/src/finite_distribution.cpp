#include "thresholdci/finite_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "thresholdci/errors.hpp"
#include "parallel_for.hpp"

namespace thresholdci {

namespace {

// Argument of Phi in the CDF integrand at u = x s, threshold c = s e:
// G(u + nu, c) - nu.
double upper_inverse_shifted(EstimatorKind kind, double u, double nu, double c) {
  const double y = u + nu;
  switch (kind) {
    case EstimatorKind::hard:
      if (std::abs(y) > c) return u;
      return y >= 0.0 ? c - nu : -c - nu;
    case EstimatorKind::soft:
      return y >= 0.0 ? u + c : u - c;
    case EstimatorKind::adaptive_soft: {
      // Roots of z^2 - y z - c^2 = 0 shifted by -nu. When the two terms
      // nearly cancel use (A + sqrt B)(A - sqrt B) = A^2 - B = -u nu - c^2.
      const double a = 0.5 * (u - nu);
      const double h = 0.5 * y;
      const double sq = std::sqrt(h * h + c * c);
      const double product = -u * nu - c * c;
      if (y >= 0.0) return a >= 0.0 ? a + sq : product / (a - sq);
      return a <= 0.0 ? a - sq : product / (a + sq);
    }
  }
  return 0.0;
}

// dG/dy at y = u + nu.
double upper_inverse_slope(EstimatorKind kind, double u, double nu, double c) {
  const double y = u + nu;
  switch (kind) {
    case EstimatorKind::hard: return std::abs(y) > c ? 1.0 : 0.0;
    case EstimatorKind::soft: return 1.0;
    case EstimatorKind::adaptive_soft: {
      const double h = 0.5 * y;
      const double sq = std::sqrt(h * h + c * c);
      const double ratio = sq > 0.0 ? h / sq : 1.0;
      return y >= 0.0 ? 0.5 * (1.0 + ratio) : 0.5 * (1.0 - ratio);
    }
  }
  return 0.0;
}

}  // namespace

ScalingFactor::ScalingFactor(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("scaling factor must be positive");
}

ScalingFactor ScalingFactor::conservative(const ProblemSetup& setup) {
  setup.validate();
  return ScalingFactor(setup.sqrt_n() / setup.xi);
}

ScalingFactor ScalingFactor::consistent(const ProblemSetup& setup) {
  setup.validate();
  return ScalingFactor(1.0 / (setup.xi * setup.eta));
}

StandardizedLaw::StandardizedLaw(EstimatorKind kind, double nu, double e, DegreesOfFreedom m,
                                 QuadratureConfig cfg)
    : kind_(kind), nu_(nu), e_(e), m_(m), cfg_(cfg) {
  if (!std::isfinite(nu)) throw DomainError("standardised law needs finite nu");
  if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("standardised law needs finite e >= 0");
  cfg_.validate();
}

std::vector<double> StandardizedLaw::breakpoints(double x) const {
  std::vector<double> out;
  auto add = [&](double denom) {
    if (denom == 0.0) return;
    const double s = -nu_ / denom;
    if (s > 0.0 && std::isfinite(s)) out.push_back(s);
  };
  if (nu_ == 0.0) return out;
  add(x);  // sign change of x s + nu
  if (kind_ == EstimatorKind::hard) {
    add(x - e_);  // x s + nu = s e
    add(x + e_);  // x s + nu = -s e
  }
  return out;
}

double StandardizedLaw::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  const RhoDensity rho(m_);
  const auto f = [&](double s) {
    double u = x * s;
    // Keep the sign of x when x s underflows.
    if (u == 0.0 && x != 0.0) u = std::copysign(std::numeric_limits<double>::denorm_min(), x);
    return normal_cdf(upper_inverse_shifted(kind_, u, nu_, s * e_)) * rho(s);
  };
  const std::vector<double> bp = breakpoints(x);
  const double v = integrate_halfline(f, m_, bp, cfg_).value;
  return std::clamp(v, 0.0, 1.0);
}

double StandardizedLaw::density(double x) const {
  if (!std::isfinite(x)) return 0.0;
  const RhoDensity rho(m_);
  double jump_part = 0.0;
  // The integrand jumps from Phi(-c - nu) to Phi(c - nu) where x s + nu
  // changes sign, at s* = -nu / x; this moves with x.
  if (nu_ != 0.0 && x != 0.0 && -std::copysign(1.0, nu_) * x > 0.0) {
    const double s_star = -nu_ / x;
    const double c = s_star * e_;
    jump_part = std::abs(nu_) / (x * x) * rho(s_star) * normal_prob_between(-c - nu_, c - nu_);
  }
  const auto f = [&](double s) {
    const double u = x * s;
    const double c = s * e_;
    const double slope = upper_inverse_slope(kind_, u, nu_, c);
    if (slope == 0.0) return 0.0;
    return s * normal_pdf(upper_inverse_shifted(kind_, u, nu_, c)) * slope * rho(s);
  };
  const std::vector<double> bp = breakpoints(x);
  return jump_part + integrate_halfline(f, m_, bp, cfg_).value;
}

double StandardizedLaw::atom_mass() const {
  if (nu_ != 0.0) return 0.0;
  return t_prob_between(-e_, e_, m_);
}

MixedDistribution::MixedDistribution(EstimatorKind kind, const ProblemSetup& setup, double theta_i,
                                     ScalingFactor alpha, QuadratureConfig cfg)
    : law_(kind, setup.sqrt_n() * theta_i / (setup.sigma * setup.xi),
           setup.sqrt_n() * setup.eta, setup.residual_df(), cfg),
      x_scale_(setup.sqrt_n() / (alpha.value() * setup.xi)) {}

double MixedDistribution::cdf(double x) const { return law_.cdf(x * x_scale_); }

double MixedDistribution::density(double x) const { return law_.density(x * x_scale_) * x_scale_; }

double MixedDistribution::atom_mass() const { return law_.atom_mass(); }

double tilde_cdf(EstimatorKind kind, double x, const ProblemSetup& setup, double theta_i,
                 ScalingFactor alpha) {
  return MixedDistribution(kind, setup, theta_i, alpha).cdf(x);
}

double tilde_density(EstimatorKind kind, double x, const ProblemSetup& setup, double theta_i,
                     ScalingFactor alpha) {
  return MixedDistribution(kind, setup, theta_i, alpha).density(x);
}

double atom_mass(const ProblemSetup& setup) {
  const DegreesOfFreedom m = setup.residual_df();
  const double e = setup.sqrt_n() * setup.eta;
  return t_prob_between(-e, e, m);
}

double mirror_check(EstimatorKind kind, const ProblemSetup& setup, double theta_i, ScalingFactor alpha,
                    const std::vector<double>& grid) {
  const MixedDistribution plus(kind, setup, theta_i, alpha);
  const MixedDistribution minus(kind, setup, -theta_i, alpha);
  double worst = 0.0;
  for (double x : grid) {
    if (theta_i == 0.0 && x == 0.0) continue;
    worst = std::max(worst, std::abs(plus.cdf(x) - (1.0 - minus.cdf(-x))));
  }
  return worst;
}

DensitySeries sample_density(const MixedDistribution& dist, double lo, double hi, int points,
                             Execution exec) {
  if (points < 2 || !(hi > lo)) throw DomainError("sample_density: need points >= 2 and hi > lo");
  DensitySeries out;
  out.x.resize(points);
  out.density.resize(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out.x[i] = i + 1 == points ? hi : lo + step * i;
  detail::parallel_for(points, exec, [&](std::int64_t i) { out.density[i] = dist.density(out.x[i]); });
  out.atom_mass = dist.atom_mass();
  return out;
}

std::vector<double> sample_cdf(const MixedDistribution& dist, const std::vector<double>& grid,
                               Execution exec) {
  std::vector<double> out(grid.size());
  detail::parallel_for(static_cast<std::int64_t>(grid.size()), exec,
              [&](std::int64_t i) { out[i] = dist.cdf(grid[i]); });
  return out;
}

}  // namespace thresholdci
