#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "thresholdci/errors.hpp"
#include "thresholdci/finite_distribution.hpp"
#include "thresholdci/limit_distribution.hpp"

using namespace thresholdci;

namespace {

const DegreesOfFreedom kM5(5);

std::vector<double> grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int j = 0; j < points; ++j) out.push_back(lo + (hi - lo) * j / (points - 1));
  return out;
}

}  // namespace

TEST_CASE("conservative closed forms") {
  for (double x : {-2.0, -0.3, 0.0, 0.8, 2.5}) {
    for (EstimatorKind kind : kAllEstimatorKinds)
      for (double nu : {0.0, 1.3, -double(INFINITY)})
        CHECK(conservative_limit_cdf(kind, x, {nu, 0.0, kM5}) == doctest::Approx(oracle::t_cdf(x, 5)).epsilon(1e-12));
    CHECK(conservative_limit_cdf(EstimatorKind::soft, x, {INFINITY, 0.7, kM5}) ==
          doctest::Approx(oracle::t_cdf(x + 0.7, 5)).epsilon(1e-12));
    CHECK(conservative_limit_cdf(EstimatorKind::soft, x, {-INFINITY, 0.7, kM5}) ==
          doctest::Approx(oracle::t_cdf(x - 0.7, 5)).epsilon(1e-12));
    CHECK(conservative_limit_cdf(EstimatorKind::hard, x, {INFINITY, 0.7, kM5}) ==
          doctest::Approx(oracle::t_cdf(x, 5)).epsilon(1e-12));
  }
  for (double x : {0.1, 0.9, 3.0})
    CHECK(conservative_limit_cdf(EstimatorKind::adaptive_soft, x, {0.0, 1.0, kM5}) ==
          doctest::Approx(oracle::t_cdf(x / 2 + std::sqrt(x * x / 4 + 1.0), 5)).epsilon(1e-12));
  CHECK(conservative_limit_cdf(EstimatorKind::hard, 1.5, {0.0, 1.0, kM5}) == doctest::Approx(oracle::t_cdf(1.5, 5)));
  CHECK(conservative_limit_cdf(EstimatorKind::hard, 0.5, {0.0, 1.0, kM5}) == doctest::Approx(oracle::t_cdf(1.0, 5)));
}

TEST_CASE("conservative limit agrees with the finite law at matching parameters") {
  // With sqrt(n) theta = nu, sqrt(n) eta = e and n - k = m the two coincide.
  ProblemSetup s;
  s.n = 100;
  s.k = 95;
  s.eta = 1.0 / 10.0;
  const double theta = 0.8 / 10.0;
  for (EstimatorKind kind : kAllEstimatorKinds) {
    const MixedDistribution d(kind, s, theta, ScalingFactor::conservative(s));
    for (double x : {-2.0, -0.9, -0.2, 0.4, 1.7})
      CHECK(conservative_limit_cdf(kind, x, {0.8, 1.0, kM5}) == doctest::Approx(d.cdf(x)).epsilon(1e-8));
  }
}

TEST_CASE("consistent limits: point masses") {
  const ConsistentRegime soft{0.4, std::nullopt, std::nullopt};
  CHECK(consistent_limit_cdf(EstimatorKind::soft, -0.41, soft) == 0.0);
  CHECK(consistent_limit_cdf(EstimatorKind::soft, -0.4, soft) == 1.0);
  const ConsistentRegime as{2.0, std::nullopt, std::nullopt};
  CHECK(consistent_limit_cdf(EstimatorKind::adaptive_soft, -0.51, as) == 0.0);
  CHECK(consistent_limit_cdf(EstimatorKind::adaptive_soft, -0.5, as) == 1.0);
  CHECK(consistent_limit_cdf(EstimatorKind::soft, -1.01, as) == 0.0);
  CHECK(consistent_limit_cdf(EstimatorKind::soft, -1.0, as) == 1.0);
  CHECK(consistent_limit_cdf(EstimatorKind::hard, -0.01, as) == 0.0);
  CHECK(consistent_limit_cdf(EstimatorKind::hard, 0.0, as) == 1.0);
  CHECK(consistent_limit_cdf(EstimatorKind::hard, -0.4, soft) == 1.0);
}

TEST_CASE("consistent limits: chi-squared mixtures") {
  const ConsistentRegime hard{1.0, kM5, std::nullopt};
  CHECK(consistent_limit_cdf(EstimatorKind::hard, -0.5, hard) ==
        doctest::Approx(oracle::chi2_cdf(20, 5) - oracle::chi2_cdf(5, 5)).epsilon(1e-10));
  const ConsistentRegime z{0.4, kM5, std::nullopt};
  const double q = 5 * 0.16;
  CHECK(consistent_limit_cdf(EstimatorKind::soft, -0.5, z) == doctest::Approx(oracle::chi2_cdf(q / 0.25, 5)).epsilon(1e-10));
  CHECK(consistent_limit_cdf(EstimatorKind::adaptive_soft, -0.5, z) ==
        doctest::Approx(oracle::chi2_cdf(q / 0.25, 5) - oracle::chi2_cdf(q * 0.25, 5)).epsilon(1e-10));
  const ConsistentRegime neg{-0.4, kM5, std::nullopt};
  CHECK(consistent_limit_cdf(EstimatorKind::soft, 0.5, neg) ==
        doctest::Approx(1.0 - oracle::chi2_cdf(q / 0.25, 5)).epsilon(1e-10));
}

TEST_CASE("consistent limits live on [-1, 1] and are valid cdfs") {
  const std::vector<ConsistentRegime> regimes{
      {0.4, kM5, std::nullopt}, {-0.6, kM5, std::nullopt}, {1.7, kM5, std::nullopt}, {0.0, kM5, std::nullopt},
      {0.4, std::nullopt, std::nullopt}, {-2.5, std::nullopt, std::nullopt}, {INFINITY, kM5, std::nullopt},
      {1.0, std::nullopt, HardBoundaryAux{1.0, 0.3, 0.0}}};
  for (const auto& r : regimes)
    for (EstimatorKind kind : kAllEstimatorKinds) {
      CHECK(consistent_limit_cdf(kind, std::nextafter(-1.0, -2.0), r) == 0.0);
      CHECK(consistent_limit_cdf(kind, 1.0, r) == 1.0);
      double prev = 0.0;
      for (double x = -1.2; x <= 1.2; x += 0.01) {
        const double f = consistent_limit_cdf(kind, x, r);
        CHECK(f >= prev - 1e-14);
        CHECK(f <= 1.0);
        prev = f;
      }
    }
}

TEST_CASE("hard finite-m positive zeta is continuous on (-1, 0)") {
  const ConsistentRegime r{0.8, kM5, std::nullopt};
  for (double x = -0.99; x < -0.01; x += 0.01) {
    const double gap = std::abs(consistent_limit_cdf(EstimatorKind::hard, x + 1e-7, r) -
                                consistent_limit_cdf(EstimatorKind::hard, x, r));
    CHECK(gap < 1e-4);
  }
}

TEST_CASE("hard boundary weight") {
  for (double f : {0.3, 1.0, 4.0})
    for (double r : {-1.5, 0.0, 0.8}) {
      const double w = hard_boundary_weight(f, r, 0.0);
      CHECK(w == doctest::Approx(oracle::hard_boundary_weight(f, r)).epsilon(1e-9));
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
    }
  CHECK(hard_boundary_weight(0.0, 0.7, 5.0) == doctest::Approx(oracle::phi(0.7)));
  CHECK(hard_boundary_weight(INFINITY, 2.0, 0.3) == doctest::Approx(oracle::phi(std::sqrt(2.0) * 0.3)));
  CHECK(hard_boundary_weight(1.0, INFINITY, 0.0) == 1.0);
  CHECK_THROWS_AS(hard_boundary_weight(-1.0, 0.0, 0.0), DomainError);

  const ConsistentRegime missing{1.0, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(consistent_limit_cdf(EstimatorKind::hard, 0.0, missing), DomainError);
  CHECK_NOTHROW(consistent_limit_cdf(EstimatorKind::soft, 0.0, missing));
  const ConsistentRegime aux{1.0, std::nullopt, HardBoundaryAux{0.0, 0.5, 0.0}};
  CHECK(consistent_limit_cdf(EstimatorKind::hard, -0.5, aux) == doctest::Approx(oracle::phi(0.5)));
}

TEST_CASE("conservative path gaps shrink with n") {
  const std::vector<std::int64_t> ns{50, 500, 5000};
  const GapReport r = weak_convergence_gap(EstimatorKind::hard, conservative_path(0.0, 1.0, kM5, ns),
                                           ConservativeRegime{0.0, 1.0, kM5}, grid(-3.0, 3.0, 61));
  REQUIRE(r.gap.size() == 3);
  CHECK(r.gap[0] > r.gap[1]);
  CHECK(r.gap[1] > r.gap[2]);
  CHECK(r.final_gap() <= 0.02);
  CHECK(r.points_used < 61);
}

TEST_CASE("e = 0 path approaches the t law") {
  const std::vector<std::int64_t> ns{50, 5000};
  const GapReport r = weak_convergence_gap(EstimatorKind::soft, conservative_path(0.5, 0.0, kM5, ns),
                                           ConservativeRegime{0.5, 0.0, kM5}, grid(-3.0, 3.0, 61));
  CHECK(r.final_gap() <= 0.02);
}

TEST_CASE("consistent soft path with m = 5") {
  const std::vector<std::int64_t> ns{50, 500, 5000};
  const GapReport r = weak_convergence_gap(EstimatorKind::soft, consistent_path(0.4, kM5, ns),
                                           ConsistentRegime{0.4, kM5, std::nullopt}, grid(-2.0, 2.0, 81));
  CHECK(r.final_gap() <= 0.02);
}

TEST_CASE("atom candidates and path validation") {
  CHECK(limit_atom_candidates(ConservativeRegime{}).size() == 1);
  const auto c = limit_atom_candidates(ConsistentRegime{0.5, kM5, std::nullopt});
  CHECK(std::find(c.begin(), c.end(), 2.0) != c.end());
  CHECK(std::find(c.begin(), c.end(), -0.5) != c.end());
  CHECK_THROWS_AS(conservative_path(INFINITY, 1.0, kM5, {50}), DomainError);
  CHECK_THROWS_AS(consistent_path(0.4, kM5, {50}, 0.7), DomainError);
  CHECK_THROWS_AS(conservative_limit_cdf(EstimatorKind::hard, 0.0, {0.0, -1.0, kM5}), DomainError);
}
