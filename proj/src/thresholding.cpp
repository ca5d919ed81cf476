#include "thresholdci/thresholding.hpp"

#include <cmath>
#include <string>

#include "thresholdci/errors.hpp"

namespace thresholdci {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::hard: return "hard";
    case EstimatorKind::soft: return "soft";
    case EstimatorKind::adaptive_soft: return "asoft";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  for (EstimatorKind k : kAllEstimatorKinds)
    if (to_string(k) == name) return k;
  throw DomainError("unknown estimator kind '" + std::string(name) + "'");
}

double threshold_kernel(EstimatorKind kind, double z, double t) {
  if (!(t >= 0.0)) throw DomainError("threshold must be nonnegative");
  if (std::abs(z) <= t) return 0.0;
  switch (kind) {
    case EstimatorKind::hard: return z;
    case EstimatorKind::soft: return z > 0.0 ? z - t : z + t;
    case EstimatorKind::adaptive_soft: return z - t * (t / z);
  }
  return 0.0;
}

Eigen::VectorXd estimate(const DesignMatrix& x, const Eigen::VectorXd& y, const ThresholdRule& rule) {
  const auto k = x.cols();
  if (rule.eta.size() != k) throw DomainError("eta must have one entry per column");
  if (!(rule.eta.array() > 0.0).all()) throw DomainError("eta entries must be positive");

  const LeastSquaresFit fit = ls_fit(x, y);
  double scale = 0.0;
  if (const auto* known = std::get_if<KnownSigma>(&rule.variance)) {
    if (!(known->sigma > 0.0)) throw DomainError("sigma must be positive");
    scale = known->sigma;
  } else {
    if (!fit.sigma_hat_sq) throw DomainError("estimated variance requires n > k");
    scale = std::sqrt(*fit.sigma_hat_sq);
  }
  const Eigen::VectorXd xi = x.xi_all();
  Eigen::VectorXd out(k);
  for (Eigen::Index i = 0; i < k; ++i)
    out(i) = threshold_kernel(rule.kind, fit.coefficients(i), scale * xi(i) * rule.eta(i));
  return out;
}

}  // namespace thresholdci
