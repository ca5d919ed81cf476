#include <doctest.h>

#include "oracles.hpp"
#include "thresholdci/errors.hpp"
#include "thresholdci/thresholding.hpp"

using namespace thresholdci;

namespace {

oracle::Kind to_oracle(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::hard: return oracle::Kind::hard;
    case EstimatorKind::soft: return oracle::Kind::soft;
    case EstimatorKind::adaptive_soft: return oracle::Kind::asoft;
  }
  return oracle::Kind::hard;
}

}  // namespace

TEST_CASE("kernels on a grid") {
  for (EstimatorKind kind : kAllEstimatorKinds)
    for (double z = -3.0; z <= 3.0; z += 0.125)
      for (double t : {0.0, 0.5, 1.0}) CHECK(threshold_kernel(kind, z, t) == oracle::kernel(to_oracle(kind), z, t));
}

TEST_CASE("threshold boundary maps to zero") {
  for (EstimatorKind kind : kAllEstimatorKinds) {
    CHECK(threshold_kernel(kind, 0.5, 0.5) == 0.0);
    CHECK(threshold_kernel(kind, -0.5, 0.5) == 0.0);
  }
  CHECK(threshold_kernel(EstimatorKind::hard, 0.5000001, 0.5) == 0.5000001);
  CHECK(threshold_kernel(EstimatorKind::soft, 2.0, 0.5) == 1.5);
  CHECK(threshold_kernel(EstimatorKind::adaptive_soft, 2.0, 1.0) == 1.5);
  CHECK_THROWS_AS(threshold_kernel(EstimatorKind::hard, 1.0, -0.1), DomainError);
}

TEST_CASE("kernels are odd and shrink toward zero") {
  for (EstimatorKind kind : kAllEstimatorKinds)
    for (double z : {0.1, 0.7, 1.3, 4.0}) {
      CHECK(threshold_kernel(kind, -z, 0.6) == -threshold_kernel(kind, z, 0.6));
      CHECK(std::abs(threshold_kernel(kind, z, 0.6)) <= z);
    }
}

TEST_CASE("kind names round-trip") {
  for (EstimatorKind kind : kAllEstimatorKinds) CHECK(parse_estimator_kind(to_string(kind)) == kind);
  CHECK_THROWS_AS(parse_estimator_kind("lasso"), DomainError);
}

TEST_CASE("componentwise estimator") {
  const DesignMatrix x = DesignMatrix::scaled_orthogonal(10, 3);
  Eigen::VectorXd theta(3);
  theta << 2.0, 0.01, -1.0;
  const Eigen::VectorXd y = x.values() * theta;
  const Eigen::VectorXd eta = Eigen::VectorXd::Constant(3, 0.5);
  const Eigen::VectorXd hard = estimate(x, y, {EstimatorKind::hard, eta, KnownSigma{1.0}});
  CHECK(hard(0) == doctest::Approx(2.0));
  CHECK(hard(1) == 0.0);
  CHECK(hard(2) == doctest::Approx(-1.0));
  const Eigen::VectorXd soft = estimate(x, y, {EstimatorKind::soft, eta, KnownSigma{2.0}});
  CHECK(soft(0) == doctest::Approx(1.0));
  CHECK(soft(2) == doctest::Approx(0.0));
  // Noise-free response: sigma_hat is ~0, so nothing is thresholded.
  const Eigen::VectorXd est = estimate(x, y, {EstimatorKind::adaptive_soft, eta, EstimatedSigma{}});
  CHECK(est(1) == doctest::Approx(0.01));
  CHECK_THROWS_AS(estimate(x, y, {EstimatorKind::hard, Eigen::VectorXd::Ones(2), KnownSigma{1.0}}), DomainError);
}
