#include "thresholdci/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thresholdci/errors.hpp"
#include "parallel_for.hpp"

namespace thresholdci {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

struct Draw {
  double ls = 0.0;          // theta_LS_i
  double sigma_hat = 0.0;   // only filled when requested
};

Draw draw_once(const SimulationPlan& plan, std::int64_t rep, bool need_sigma_hat) {
  RandomStream rng(plan.seed, static_cast<std::uint64_t>(rep));
  const ProblemSetup& s = plan.setup;
  Draw d;
  if (!plan.design) {
    d.ls = plan.target_theta() + s.sigma * s.xi / s.sqrt_n() * rng.normal();
    if (need_sigma_hat) {
      const DegreesOfFreedom m = s.residual_df();
      d.sigma_hat = s.sigma * std::sqrt(rng.chi_square(m) / m.as_double());
    }
    return d;
  }
  const DesignMatrix& x = *plan.design;
  Eigen::VectorXd u(x.rows());
  for (Eigen::Index r = 0; r < u.size(); ++r) u(r) = s.sigma * rng.normal();
  const Eigen::VectorXd y = x.values() * plan.theta + u;
  const LeastSquaresFit fit = ls_fit(x, y);
  d.ls = fit.coefficients(s.component_index - 1);
  if (need_sigma_hat) d.sigma_hat = std::sqrt(fit.sigma_hat_sq.value());
  return d;
}

CoverageEstimate summarise(std::int64_t hits, std::int64_t reps) {
  CoverageEstimate out;
  out.hits = hits;
  out.reps = reps;
  out.coverage = static_cast<double>(hits) / static_cast<double>(reps);
  out.std_error = std::sqrt(out.coverage * (1.0 - out.coverage) / static_cast<double>(reps));
  return out;
}

template <class Hit>
std::int64_t count_hits(std::int64_t reps, Execution exec, Hit&& hit) {
  std::int64_t hits = 0;
  if (exec == Execution::serial) {
    for (std::int64_t r = 0; r < reps; ++r) hits += hit(r) ? 1 : 0;
    return hits;
  }
  // Integer counts make the reduction order irrelevant.
  std::vector<char> flags(static_cast<std::size_t>(reps));
  detail::parallel_for(reps, exec, [&](std::int64_t r) { flags[r] = hit(r) ? 1 : 0; });
  for (char f : flags) hits += f;
  return hits;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

std::uint32_t RandomStream::next_u32() {
  if (used_ == 4) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

double RandomStream::uniform() {
  const std::uint64_t hi = next_u32() >> 5;  // 27 bits
  const std::uint64_t lo = next_u32() >> 6;  // 26 bits
  const std::uint64_t bits = (hi << 26) | lo;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

double RandomStream::chi_square(DegreesOfFreedom m) {
  if (m.value() <= 32) {
    double sum = 0.0;
    for (std::int64_t j = 0; j < m.value(); ++j) {
      const double z = normal();
      sum += z * z;
    }
    return sum;
  }
  // Marsaglia-Tsang for Gamma(m/2, 1), doubled.
  const double d = 0.5 * m.as_double() - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = 0.0;
    double v = 0.0;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return 2.0 * d * v;
  }
}

SimulationPlan SimulationPlan::synthetic(const ProblemSetup& setup, double theta_i, std::int64_t reps,
                                         std::uint64_t seed) {
  setup.validate();
  SimulationPlan plan;
  plan.setup = setup;
  plan.theta = Eigen::VectorXd::Zero(setup.k);
  plan.theta(setup.component_index - 1) = theta_i;
  plan.reps = reps;
  plan.seed = seed;
  plan.validate();
  return plan;
}

void SimulationPlan::validate() const {
  setup.validate();
  if (reps < 1) throw DomainError("reps must be >= 1");
  if (theta.size() != setup.k) throw DomainError("theta must have k entries");
  if (!theta.allFinite()) throw DomainError("theta must be finite");
  if (design) {
    if (design->rows() != setup.n || design->cols() != setup.k)
      throw DomainError("design matrix dimensions differ from n x k");
    const double xi = design->xi(setup.component_index);
    if (std::abs(xi - setup.xi) > 1e-8 * setup.xi) throw DomainError("design matrix xi differs from setup xi");
  }
}

double SimulationPlan::target_theta() const { return theta(setup.component_index - 1); }

CoverageEstimate simulate_coverage(const SimulationPlan& plan, EstimatorKind kind, const IntervalSpec& spec,
                                   Execution exec) {
  plan.validate();
  spec.validate();
  const bool estimated = spec.mode == VarianceMode::estimated;
  if (estimated) plan.setup.require_estimable();
  const double theta = plan.target_theta();
  const ProblemSetup& s = plan.setup;
  const auto hit = [&](std::int64_t r) {
    const Draw d = draw_once(plan, r, estimated);
    const double scale = estimated ? d.sigma_hat : s.sigma;
    const double est = threshold_kernel(kind, d.ls, scale * s.xi * s.eta);
    return est - scale * spec.a <= theta && theta <= est + scale * spec.b;
  };
  return summarise(count_hits(plan.reps, exec, hit), plan.reps);
}

CoverageEstimate simulate_ls_coverage(const SimulationPlan& plan, double half_length, VarianceMode mode,
                                      Execution exec) {
  plan.validate();
  if (!(half_length >= 0.0)) throw DomainError("half-length must be nonnegative");
  const bool estimated = mode == VarianceMode::estimated;
  if (estimated) plan.setup.require_estimable();
  const double theta = plan.target_theta();
  const auto hit = [&](std::int64_t r) {
    const Draw d = draw_once(plan, r, estimated);
    const double scale = estimated ? d.sigma_hat : plan.setup.sigma;
    return std::abs(d.ls - theta) <= scale * half_length;
  };
  return summarise(count_hits(plan.reps, exec, hit), plan.reps);
}

std::vector<double> simulate_scaled_errors(const SimulationPlan& plan, EstimatorKind kind, ScalingFactor alpha,
                                           Execution exec) {
  plan.validate();
  plan.setup.require_estimable();
  const double theta = plan.target_theta();
  const ProblemSetup& s = plan.setup;
  std::vector<double> out(static_cast<std::size_t>(plan.reps));
  detail::parallel_for(plan.reps, exec, [&](std::int64_t r) {
    const Draw d = draw_once(plan, r, true);
    const double est = threshold_kernel(kind, d.ls, d.sigma_hat * s.xi * s.eta);
    out[r] = alpha.value() * (est - theta) / d.sigma_hat;
  });
  return out;
}

std::vector<double> simulate_variance_ratio(const SimulationPlan& plan, Execution exec) {
  plan.validate();
  const DegreesOfFreedom m = plan.setup.residual_df();
  const double sigma_sq = plan.setup.sigma * plan.setup.sigma;
  std::vector<double> out(static_cast<std::size_t>(plan.reps));
  detail::parallel_for(plan.reps, exec, [&](std::int64_t r) {
    const Draw d = draw_once(plan, r, true);
    out[r] = m.as_double() * d.sigma_hat * d.sigma_hat / sigma_sq;
  });
  return out;
}

EmpiricalCdf simulate_scaled_error_ecdf(const SimulationPlan& plan, EstimatorKind kind, ScalingFactor alpha,
                                        const std::vector<double>& grid, Execution exec) {
  std::vector<double> draws = simulate_scaled_errors(plan, kind, alpha, exec);
  std::sort(draws.begin(), draws.end());
  EmpiricalCdf out;
  out.grid = grid;
  out.reps = plan.reps;
  const double total = static_cast<double>(draws.size());
  out.values.reserve(grid.size());
  for (double x : grid) {
    const auto upto = std::upper_bound(draws.begin(), draws.end(), x) - draws.begin();
    out.values.push_back(static_cast<double>(upto) / total);
  }
  const auto zeros = std::upper_bound(draws.begin(), draws.end(), 0.0) - std::lower_bound(draws.begin(), draws.end(), 0.0);
  out.zero_mass = static_cast<double>(zeros) / total;
  return out;
}

double ks_distance_on_grid(const std::vector<double>& sorted_draws, const std::vector<double>& grid,
                           const std::vector<double>& cdf_values) {
  if (grid.size() != cdf_values.size()) throw DomainError("grid and cdf values differ in length");
  if (sorted_draws.empty()) throw DomainError("no draws");
  const double total = static_cast<double>(sorted_draws.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto below = std::lower_bound(sorted_draws.begin(), sorted_draws.end(), grid[j]) - sorted_draws.begin();
    const auto upto = std::upper_bound(sorted_draws.begin(), sorted_draws.end(), grid[j]) - sorted_draws.begin();
    worst = std::max(worst, std::abs(static_cast<double>(upto) / total - cdf_values[j]));
    worst = std::max(worst, std::abs(static_cast<double>(below) / total - cdf_values[j]));
  }
  return worst;
}

}  // namespace thresholdci
