#include "thresholdci/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thresholdci/errors.hpp"
#include "thresholdci/root_finding.hpp"
#include "parallel_for.hpp"

namespace thresholdci {

namespace {

// Least-squares value z > c mapped to kernel value y; inverse on the
// positive branch, extended below y = kernel(c+) by values <= c.
double positive_preimage(EstimatorKind kind, double y, double c) {
  switch (kind) {
    case EstimatorKind::hard: return y;
    case EstimatorKind::soft: return y + c;
    case EstimatorKind::adaptive_soft: {
      // Larger root of z^2 - y z - c^2; the roots multiply to -c^2.
      const double r = std::hypot(y, 2.0 * c);
      return y >= 0.0 ? 0.5 * (y + r) : 2.0 * c * c / (r - y);
    }
  }
  return y;
}

double negative_preimage(EstimatorKind kind, double y, double c) {
  switch (kind) {
    case EstimatorKind::hard: return y;
    case EstimatorKind::soft: return y - c;
    case EstimatorKind::adaptive_soft: {
      const double r = std::hypot(y, 2.0 * c);
      return y <= 0.0 ? 0.5 * (y - r) : -2.0 * c * c / (y + r);
    }
  }
  return y;
}

// Coverage at sigma = 1. The least-squares estimate Z ~ N(theta, 1/scale^2)
// with scale = sqrt(n)/xi and threshold c = xi eta. theta lies in the
// interval iff kernel(Z) lies in [theta - b, theta + a]; the preimage is
// at most three disjoint pieces in Z.
double unit_coverage(EstimatorKind kind, double theta, double a, double b, double c, double scale) {
  const double lo = theta - b;
  const double hi = theta + a;
  double p = 0.0;
  const auto add = [&](double z_lo, double z_hi) {
    if (z_hi > z_lo) p += normal_prob_between(scale * (z_lo - theta), scale * (z_hi - theta));
  };
  if (lo <= 0.0 && 0.0 <= hi) add(-c, c);
  add(std::max(c, positive_preimage(kind, lo, c)), positive_preimage(kind, hi, c));
  add(negative_preimage(kind, lo, c), std::min(-c, negative_preimage(kind, hi, c)));
  return std::min(p, 1.0);
}

BoundValue clamp_probability(double v, bool exact) {
  if (v < 0.0) return {0.0, exact, true};
  return {std::min(v, 1.0), exact, false};
}

void require_mode(const IntervalSpec& spec, VarianceMode mode) {
  spec.validate();
  if (spec.mode != mode)
    throw DomainError(mode == VarianceMode::known ? "interval must be a known-variance interval"
                                                  : "interval must be an estimated-variance interval");
}

// Brackets and solves g(a) = target for a nondecreasing g with g(lo) < target.
double solve_increasing(const std::function<double(double)>& g, double target, double lo, double step) {
  double hi = lo + step;
  int expansions = 0;
  while (g(hi) < target) {
    lo = hi;
    hi = lo + step * std::ldexp(1.0, ++expansions);
    if (expansions > 60) throw DomainError("half-length search failed to bracket the target level");
  }
  return find_root([&](double a) { return g(a) - target; }, lo, hi, 1e-13);
}

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

IntervalSpec IntervalSpec::known(double a, double b) {
  IntervalSpec s{a, b, VarianceMode::known};
  s.validate();
  return s;
}

IntervalSpec IntervalSpec::estimated(double a) {
  IntervalSpec s{a, a, VarianceMode::estimated};
  s.validate();
  return s;
}

void IntervalSpec::validate() const {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("half-lengths must be finite and nonnegative");
  if (mode == VarianceMode::estimated && a != b)
    throw DomainError("estimated-variance intervals must be symmetric");
}

double known_coverage(EstimatorKind kind, double theta_i, double sigma, const IntervalSpec& spec,
                      const ProblemSetup& setup) {
  require_mode(spec, VarianceMode::known);
  setup.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!std::isfinite(theta_i)) throw DomainError("theta must be finite");
  return unit_coverage(kind, theta_i / sigma, spec.a, spec.b, setup.xi * setup.eta,
                       setup.sqrt_n() / setup.xi);
}

BoundValue infimal_known_bound(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup) {
  require_mode(spec, VarianceMode::known);
  setup.validate();
  const double r = setup.sqrt_n() / setup.xi;
  const double e = setup.sqrt_n() * setup.eta;
  const double small = std::min(spec.a, spec.b);
  const double large = std::max(spec.a, spec.b);
  switch (kind) {
    case EstimatorKind::hard:
      if (setup.xi * setup.eta > spec.a + spec.b) return {0.0, true, false};
      return clamp_probability(normal_prob_between(-r * large, r * small - e), true);
    case EstimatorKind::soft:
      return clamp_probability(normal_prob_between(-r * large - e, r * small - e), true);
    case EstimatorKind::adaptive_soft: {
      const double half_sum = 0.5 * (spec.a + spec.b);
      const double root = std::hypot(half_sum, setup.xi * setup.eta);
      const double lower = r * (0.5 * (small - large) - root);
      return clamp_probability(normal_prob_between(lower, r * small - e), true);
    }
  }
  return {};
}

double infimal_known_coverage(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup) {
  return infimal_known_bound(kind, spec, setup).value;
}

double solve_known_half_length(EstimatorKind kind, double alpha, const ProblemSetup& setup) {
  require_level(alpha);
  setup.validate();
  const double lo = kind == EstimatorKind::hard ? 0.5 * setup.xi * setup.eta : 0.0;
  const double step = setup.xi * (setup.eta + 1.0 / setup.sqrt_n());
  const double a = solve_increasing(
      [&](double h) { return infimal_known_coverage(kind, IntervalSpec::known_symmetric(h), setup); },
      1.0 - alpha, lo, step);
  if (kind == EstimatorKind::hard && !(a > 0.5 * setup.xi * setup.eta))
    throw NumericalFailure("hard-thresholding half-length not above xi eta / 2", a, 0.0);
  return a;
}

double unknown_coverage(EstimatorKind kind, double theta_i, double sigma, const IntervalSpec& spec,
                        const ProblemSetup& setup, const QuadratureConfig& cfg) {
  require_mode(spec, VarianceMode::estimated);
  const DegreesOfFreedom m = setup.residual_df();
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!std::isfinite(theta_i)) throw DomainError("theta must be finite");
  const double theta = theta_i / sigma;
  const double a = spec.a;
  const double c = setup.xi * setup.eta;
  const double scale = setup.sqrt_n() / setup.xi;
  const RhoDensity rho(m);
  const auto f = [&](double s) { return unit_coverage(kind, theta, a * s, a * s, c * s, scale) * rho(s); };

  // Values of s at which the pieces switch: 0 enters the interval, and the
  // interval ends cross the thresholds +/- c s.
  std::vector<double> bp;
  const double t = std::abs(theta);
  if (t > 0.0) {
    if (a > 0.0) bp.push_back(t / a);
    bp.push_back(t / (a + c));
    if (a != c) bp.push_back(t / std::abs(a - c));
  }
  const double v = integrate_halfline(f, m, bp, cfg).value;
  return std::clamp(v, 0.0, 1.0);
}

BoundValue lower_bound_unknown(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup) {
  require_mode(spec, VarianceMode::estimated);
  const DegreesOfFreedom m = setup.residual_df();
  const double big_a = setup.sqrt_n() * spec.a / setup.xi;
  const double e = setup.sqrt_n() * setup.eta;
  switch (kind) {
    case EstimatorKind::hard: return clamp_probability(t_prob_between(-big_a, big_a - e, m), false);
    case EstimatorKind::soft: return clamp_probability(t_prob_between(-big_a - e, big_a - e, m), true);
    case EstimatorKind::adaptive_soft:
      return clamp_probability(t_prob_between(-std::hypot(big_a, e), big_a - e, m), false);
  }
  return {};
}

double upper_bound_unknown(const IntervalSpec& spec, const ProblemSetup& setup) {
  require_mode(spec, VarianceMode::estimated);
  const DegreesOfFreedom m = setup.residual_df();
  const double big_a = setup.sqrt_n() * spec.a / setup.xi;
  return std::max(0.0, t_prob_between(-big_a, big_a, m));
}

double solve_unknown_half_length(EstimatorKind kind, double alpha, const ProblemSetup& setup) {
  require_level(alpha);
  setup.require_estimable();
  const double lo = kind == EstimatorKind::hard ? 0.5 * setup.xi * setup.eta : 0.0;
  const double step = setup.xi * (setup.eta + 1.0 / setup.sqrt_n());
  return solve_increasing(
      [&](double h) { return lower_bound_unknown(kind, IntervalSpec::estimated(h), setup).value; },
      1.0 - alpha, lo, step);
}

double coverage_at_infinity(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup) {
  spec.validate();
  const double r = setup.sqrt_n() / setup.xi;
  // Soft keeps its shrinkage bias c as theta grows; the other two lose it.
  const double shift = kind == EstimatorKind::soft ? setup.sqrt_n() * setup.eta : 0.0;
  const double lo = shift - r * spec.b;
  const double hi = shift + r * spec.a;
  if (spec.mode == VarianceMode::known) {
    setup.validate();
    return std::max(0.0, normal_prob_between(lo, hi));
  }
  return std::max(0.0, t_prob_between(lo, hi, setup.residual_df()));
}

std::vector<double> coverage_curve(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup,
                                   const std::vector<double>& thetas, Execution exec,
                                   const QuadratureConfig& cfg) {
  spec.validate();
  if (spec.mode == VarianceMode::estimated) setup.require_estimable();
  else setup.validate();
  std::vector<double> out(thetas.size());
  detail::parallel_for(static_cast<std::int64_t>(thetas.size()), exec, [&](std::int64_t i) {
    out[i] = spec.mode == VarianceMode::known ? known_coverage(kind, thetas[i], 1.0, spec, setup)
                                              : unknown_coverage(kind, thetas[i], 1.0, spec, setup, cfg);
  });
  return out;
}

MinCoverage min_coverage_search(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup,
                                const SearchConfig& cfg) {
  if (cfg.grid_points < 3) throw DomainError("search grid needs at least 3 points");
  if (!(cfg.refine_tol > 0.0)) throw DomainError("refinement tolerance must be positive");
  spec.validate();
  const double theta_max = spec.a + setup.xi * setup.eta + 10.0 * setup.xi / setup.sqrt_n();
  const int points = cfg.grid_points;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = theta_max * static_cast<double>(i) / (points - 1);
  const std::vector<double> values = coverage_curve(kind, spec, setup, grid, cfg.execution, cfg.quadrature);

  // First index attaining the minimum: ties go to the smaller theta.
  int best = 0;
  for (int i = 1; i < points; ++i)
    if (values[i] < values[best]) best = i;

  const auto f = [&](double theta) {
    return spec.mode == VarianceMode::known ? known_coverage(kind, theta, 1.0, spec, setup)
                                            : unknown_coverage(kind, theta, 1.0, spec, setup, cfg.quadrature);
  };
  MinCoverage out{values[best], grid[best], false};
  const double lo = grid[std::max(best - 1, 0)];
  const double hi = grid[std::min(best + 1, points - 1)];
  const double theta_star = golden_section_minimize(f, lo, hi, cfg.refine_tol);
  const double refined = f(theta_star);
  if (refined < out.coverage) out = {refined, theta_star, false};

  const double limit = coverage_at_infinity(kind, spec, setup);
  if (limit < out.coverage) out = {limit, std::numeric_limits<double>::infinity(), true};
  return out;
}

double simple_interval_infimal(EstimatorKind kind, double d, const ProblemSetup& setup, VarianceMode mode) {
  if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("d must be finite and nonnegative");
  const double a = d * setup.xi * setup.eta;
  if (mode == VarianceMode::known) return infimal_known_coverage(kind, IntervalSpec::known_symmetric(a), setup);
  return lower_bound_unknown(kind, IntervalSpec::estimated(a), setup).value;
}

CoverageReport assess_interval(EstimatorKind kind, const IntervalSpec& spec, const ProblemSetup& setup,
                               const SearchConfig& cfg) {
  require_mode(spec, VarianceMode::estimated);
  CoverageReport report;
  const MinCoverage found = min_coverage_search(kind, spec, setup, cfg);
  report.analytic = found.coverage;
  if (!found.at_infinity) report.minimizer_theta = found.theta;
  report.lower_bound = lower_bound_unknown(kind, spec, setup).value;
  report.upper_bound = upper_bound_unknown(spec, setup);
  return report;
}

}  // namespace thresholdci
