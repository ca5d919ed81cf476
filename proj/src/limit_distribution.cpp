#include "thresholdci/limit_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thresholdci/errors.hpp"
#include "parallel_for.hpp"

namespace thresholdci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double step(double x, double at) { return x >= at ? 1.0 : 0.0; }

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// P(lo < chi2_m <= hi) for 0 <= lo <= hi <= inf.
double chi_sq_between(double lo, double hi, DegreesOfFreedom m) {
  if (!(hi > lo)) return 0.0;
  return std::max(0.0, chi_sq_cdf(hi, m) - chi_sq_cdf(lo, m));
}

double hard_conservative_integrand(double x, double s, double nu, double e) {
  const double y = x * s + nu;
  const double c = s * e;
  if (std::abs(y) > c) return normal_cdf(x * s);
  if (y >= 0.0) return normal_cdf(-nu + c);
  return normal_cdf(-nu - c);
}

double soft_conservative_integrand(double x, double s, double nu, double e) {
  return x * s + nu >= 0.0 ? normal_cdf((x + e) * s) : normal_cdf((x - e) * s);
}

double adaptive_conservative_integrand(double x, double s, double nu, double e) {
  const double u = x * s;
  const double v = s * e;
  const double root = std::sqrt(0.25 * (u + nu) * (u + nu) + v * v);
  const double mid = 0.5 * (u - nu);
  return u + nu >= 0.0 ? normal_cdf(mid + root) : normal_cdf(mid - root);
}

double consistent_finite_m(EstimatorKind kind, double x, double zeta, DegreesOfFreedom m) {
  if (zeta == 0.0 || std::isinf(zeta)) {
    if (kind == EstimatorKind::soft && std::isinf(zeta)) return step(x, -sign(zeta));
    return step(x, 0.0);
  }
  const double q = m.as_double() * zeta * zeta;
  const double upper = x == 0.0 ? kInf : q / (x * x);
  if (zeta > 0.0) {
    if (x >= 0.0) return 1.0;
    if (x < -1.0) return 0.0;
    switch (kind) {
      case EstimatorKind::hard: return chi_sq_between(q, upper, m);
      case EstimatorKind::soft: return chi_sq_cdf(upper, m);
      case EstimatorKind::adaptive_soft: return chi_sq_between(q * x * x, upper, m);
    }
  }
  if (x >= 1.0) return 1.0;
  if (x < 0.0) return 0.0;
  switch (kind) {
    case EstimatorKind::hard: return std::min(1.0, chi_sq_cdf(q, m) + chi_sq_sf(upper, m));
    case EstimatorKind::soft: return chi_sq_sf(upper, m);
    case EstimatorKind::adaptive_soft: return std::min(1.0, chi_sq_cdf(q * x * x, m) + chi_sq_sf(upper, m));
  }
  return 0.0;
}

double consistent_infinite_m(EstimatorKind kind, double x, const ConsistentRegime& regime) {
  const double zeta = regime.zeta;
  const double abs_zeta = std::abs(zeta);
  switch (kind) {
    case EstimatorKind::hard:
      if (abs_zeta < 1.0) return step(x, -zeta);
      if (abs_zeta > 1.0) return step(x, 0.0);
      {
        if (!regime.hard_aux) throw DomainError("hard thresholding with |zeta| = 1 and m = inf needs (f, r, s)");
        const double w = hard_boundary_weight(regime.hard_aux->f, regime.hard_aux->r, regime.hard_aux->s);
        return w * step(x, -zeta) + (1.0 - w) * step(x, 0.0);
      }
    case EstimatorKind::soft:
      if (abs_zeta <= 1.0) return step(x, -zeta);
      return step(x, -sign(zeta));
    case EstimatorKind::adaptive_soft:
      if (abs_zeta <= 1.0) return step(x, -zeta);
      if (std::isinf(zeta)) return step(x, 0.0);
      return step(x, -1.0 / zeta);
  }
  return 0.0;
}

}  // namespace

void ConservativeRegime::validate() const {
  if (std::isnan(nu)) throw DomainError("nu must not be NaN");
  if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("e must be finite and nonnegative");
}

double conservative_limit_cdf(EstimatorKind kind, double x, const ConservativeRegime& regime,
                              const QuadratureConfig& cfg) {
  regime.validate();
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  const DegreesOfFreedom m = regime.m;
  const double e = regime.e;
  const double nu = regime.nu;
  if (e == 0.0) return t_cdf(x, m);
  if (std::isinf(nu)) return kind == EstimatorKind::soft ? t_cdf(x + sign(nu) * e, m) : t_cdf(x, m);
  if (nu == 0.0) {
    switch (kind) {
      case EstimatorKind::hard:
        if (std::abs(x) > e) return t_cdf(x, m);
        return x >= 0.0 ? t_cdf(e, m) : t_cdf(-e, m);
      case EstimatorKind::soft: return x >= 0.0 ? t_cdf(x + e, m) : t_cdf(x - e, m);
      case EstimatorKind::adaptive_soft: {
        const double root = std::sqrt(0.25 * x * x + e * e);
        return x >= 0.0 ? t_cdf(0.5 * x + root, m) : t_cdf(0.5 * x - root, m);
      }
    }
  }
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;

  const RhoDensity rho(m);
  std::vector<double> bp;
  const auto add = [&](double denom) {
    if (denom != 0.0 && -nu / denom > 0.0) bp.push_back(-nu / denom);
  };
  add(x);
  if (kind == EstimatorKind::hard) {
    add(x - e);
    add(x + e);
  }
  const auto f = [&](double s) {
    double g = 0.0;
    switch (kind) {
      case EstimatorKind::hard: g = hard_conservative_integrand(x, s, nu, e); break;
      case EstimatorKind::soft: g = soft_conservative_integrand(x, s, nu, e); break;
      case EstimatorKind::adaptive_soft: g = adaptive_conservative_integrand(x, s, nu, e); break;
    }
    return g * rho(s);
  };
  return std::clamp(integrate_halfline(f, m, bp, cfg).value, 0.0, 1.0);
}

double consistent_limit_cdf(EstimatorKind kind, double x, const ConsistentRegime& regime) {
  if (std::isnan(x) || std::isnan(regime.zeta)) throw DomainError("consistent limit: NaN argument");
  if (regime.m) return consistent_finite_m(kind, x, regime.zeta, *regime.m);
  return consistent_infinite_m(kind, x, regime);
}

double hard_boundary_weight(double f, double r, double s) {
  if (!(f >= 0.0)) throw DomainError("f must be nonnegative");
  if (std::isnan(r) || std::isnan(s)) throw DomainError("r and s must not be NaN");
  if (f == 0.0) return normal_cdf(r);
  if (std::isinf(f)) return normal_cdf(std::numbers::sqrt2 * s);
  if (std::isinf(r)) return r > 0.0 ? 1.0 : 0.0;
  const double slope = f / std::numbers::sqrt2;
  const auto g = [&](double t) { return normal_cdf(slope * t + r) * normal_pdf(t); };
  const double kink = -r / slope;
  const double pts[] = {kink};
  const double v = integrate(g, -kInf, kInf, pts).value;
  return std::clamp(v, 0.0, 1.0);
}

double limit_cdf(EstimatorKind kind, double x, const LimitRegime& regime) {
  if (const auto* c = std::get_if<ConservativeRegime>(&regime)) return conservative_limit_cdf(kind, x, *c);
  return consistent_limit_cdf(kind, x, std::get<ConsistentRegime>(regime));
}

std::vector<double> limit_atom_candidates(const LimitRegime& regime) {
  std::vector<double> out{0.0};
  if (const auto* c = std::get_if<ConsistentRegime>(&regime)) {
    out.push_back(-1.0);
    out.push_back(1.0);
    const double z = c->zeta;
    if (std::isfinite(z)) {
      out.push_back(z);
      out.push_back(-z);
      if (z != 0.0) {
        out.push_back(1.0 / z);
        out.push_back(-1.0 / z);
      }
    }
  }
  return out;
}

std::vector<PathPoint> conservative_path(double nu, double e, DegreesOfFreedom m, const std::vector<std::int64_t>& ns) {
  if (!std::isfinite(nu)) throw DomainError("conservative path needs finite nu");
  if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("e must be finite and nonnegative");
  std::vector<PathPoint> path;
  for (std::int64_t n : ns) {
    const double root_n = std::sqrt(static_cast<double>(n));
    PathPoint p;
    p.setup.n = n;
    p.setup.k = n - m.value();
    p.setup.eta = (e + 2.0 / root_n) / root_n;
    p.setup.validate();
    p.theta = (nu + 1.0 / root_n) / root_n;
    path.push_back(p);
  }
  return path;
}

std::vector<PathPoint> consistent_path(double zeta, std::optional<DegreesOfFreedom> m,
                                       const std::vector<std::int64_t>& ns, double eta_power) {
  if (!std::isfinite(zeta)) throw DomainError("consistent path needs finite zeta");
  if (!(eta_power > 0.0 && eta_power < 0.5)) throw DomainError("eta power must lie in (0, 1/2)");
  std::vector<PathPoint> path;
  for (std::int64_t n : ns) {
    PathPoint p;
    p.setup.n = n;
    p.setup.k = m ? n - m->value() : n / 2;
    p.setup.eta = std::pow(static_cast<double>(n), -eta_power);
    p.setup.validate();
    p.theta = zeta * p.setup.eta;
    path.push_back(p);
  }
  return path;
}

GapReport weak_convergence_gap(EstimatorKind kind, const std::vector<PathPoint>& path, const LimitRegime& regime,
                               const std::vector<double>& grid, double exclusion, Execution exec) {
  if (!(exclusion >= 0.0)) throw DomainError("exclusion radius must be nonnegative");
  const std::vector<double> atoms = limit_atom_candidates(regime);
  std::vector<double> kept;
  for (double x : grid) {
    const bool near_atom =
        std::any_of(atoms.begin(), atoms.end(), [&](double a) { return std::abs(x - a) < exclusion; });
    if (!near_atom) kept.push_back(x);
  }
  std::vector<double> limit(kept.size());
  detail::parallel_for(static_cast<std::int64_t>(kept.size()), exec,
                       [&](std::int64_t j) { limit[j] = limit_cdf(kind, kept[j], regime); });

  const bool conservative = std::holds_alternative<ConservativeRegime>(regime);
  GapReport report;
  report.points_used = static_cast<int>(kept.size());
  for (const PathPoint& p : path) {
    const ScalingFactor alpha =
        conservative ? ScalingFactor::conservative(p.setup) : ScalingFactor::consistent(p.setup);
    const MixedDistribution dist(kind, p.setup, p.theta, alpha);
    const std::vector<double> finite = sample_cdf(dist, kept, exec);
    double worst = 0.0;
    for (std::size_t j = 0; j < kept.size(); ++j) worst = std::max(worst, std::abs(finite[j] - limit[j]));
    report.n.push_back(p.setup.n);
    report.gap.push_back(worst);
  }
  return report;
}

}  // namespace thresholdci
