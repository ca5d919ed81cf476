#pragma once

// Hard, soft and adaptive soft thresholding of the least-squares estimate,
// each with a threshold sigma*xi_i*eta_i (known variance) or
// sigma_hat*xi_i*eta_i (estimated variance).

#include <array>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "thresholdci/model.hpp"

namespace thresholdci {

enum class EstimatorKind { hard, soft, adaptive_soft };

inline constexpr std::array<EstimatorKind, 3> kAllEstimatorKinds = {
    EstimatorKind::hard, EstimatorKind::soft, EstimatorKind::adaptive_soft};

/// "hard", "soft" or "asoft".
std::string_view to_string(EstimatorKind kind);
/// Inverse of to_string; throws DomainError on unknown names.
EstimatorKind parse_estimator_kind(std::string_view name);

/// Scalar thresholding map applied to a least-squares value z with
/// threshold t >= 0. |z| <= t maps to 0 for every kind (the boundary
/// included); otherwise hard keeps z, soft shrinks by t and adaptive soft
/// returns z - t^2 / z.
double threshold_kernel(EstimatorKind kind, double z, double t);

struct KnownSigma {
  double sigma;
};
struct EstimatedSigma {};

struct ThresholdRule {
  EstimatorKind kind;
  Eigen::VectorXd eta;  // one positive tuning parameter per component
  std::variant<KnownSigma, EstimatedSigma> variance;
};

/// Thresholding estimator for every component: component i is
/// threshold_kernel(kind, theta_ls_i, c * xi_i * eta_i) with c = sigma or
/// sigma_hat.
Eigen::VectorXd estimate(const DesignMatrix& x, const Eigen::VectorXd& y, const ThresholdRule& rule);

}  // namespace thresholdci
