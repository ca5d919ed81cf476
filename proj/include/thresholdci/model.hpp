#pragma once

// The Gaussian linear model y = X theta + u, u ~ N(0, sigma^2 I_n), with
// least-squares estimation and the per-component scale xi_i, the square root
// of the i-th diagonal entry of (X'X/n)^{-1}.

#include <cstdint>
#include <filesystem>
#include <optional>

#include <Eigen/Dense>

#include "thresholdci/special_functions.hpp"

namespace thresholdci {

enum class VarianceMode { known, estimated };

/// Scalar description of one component's estimation problem.
struct ProblemSetup {
  std::int64_t n = 40;
  std::int64_t k = 35;
  double xi = 1.0;
  double sigma = 1.0;
  double eta = 0.05;
  std::int64_t component_index = 1;  // 1-based, 1 <= i <= k

  /// n = 40, k = 35, xi = 1, sigma = 1, eta = 0.05.
  static ProblemSetup reference();
  ProblemSetup with_eta(double new_eta) const;

  /// Throws DomainError unless n >= k >= 1, xi, sigma, eta > 0, 1 <= i <= k.
  void validate() const;
  /// validate() plus n > k, required by every sigma-hat based quantity.
  void require_estimable() const;
  /// Degrees of freedom n - k of the variance estimator.
  DegreesOfFreedom residual_df() const;
  double sqrt_n() const;
};

/// Full column rank n x k regressor matrix. Immutable; the QR factorisation
/// is computed once at construction.
class DesignMatrix {
 public:
  explicit DesignMatrix(Eigen::MatrixXd values);

  /// Plain rectangular numeric CSV, no header, comma separated.
  static DesignMatrix from_csv(const std::filesystem::path& path);
  /// n x k design with orthogonal columns and X'X = n I (so every xi is 1).
  static DesignMatrix scaled_orthogonal(std::int64_t n, std::int64_t k);

  std::int64_t rows() const noexcept { return values_.rows(); }
  std::int64_t cols() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  /// xi for 1-based component i.
  double xi(std::int64_t i) const;
  /// All xi values, index 0 holding component 1.
  Eigen::VectorXd xi_all() const;
  /// Solves the least-squares problem for a response vector.
  Eigen::VectorXd solve(const Eigen::VectorXd& y) const;

 private:
  Eigen::MatrixXd values_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::VectorXd inverse_gram_diagonal_;  // diag((X'X)^{-1})
};

double compute_xi(const DesignMatrix& x, std::int64_t i);

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;
  /// Residual sum of squares over n - k; absent when n == k.
  std::optional<double> sigma_hat_sq;
};

LeastSquaresFit ls_fit(const DesignMatrix& x, const Eigen::VectorXd& y);

/// Half-length of the standard least-squares interval at level 1 - alpha.
/// Known mode returns sigma * z (z = xi * Phi^{-1}(1 - alpha/2) / sqrt(n));
/// estimated mode returns the multiplier t of sigma-hat.
double standard_ls_interval(const ProblemSetup& setup, VarianceMode mode, double alpha);

}  // namespace thresholdci
