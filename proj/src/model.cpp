#include "thresholdci/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thresholdci/errors.hpp"

namespace thresholdci {

ProblemSetup ProblemSetup::reference() { return ProblemSetup{}; }

ProblemSetup ProblemSetup::with_eta(double new_eta) const {
  ProblemSetup s = *this;
  s.eta = new_eta;
  return s;
}

void ProblemSetup::validate() const {
  if (k < 1) throw DomainError("k must be >= 1");
  if (n < k) throw DomainError("n must be >= k");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("xi must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("eta must be positive");
  if (component_index < 1 || component_index > k) throw DomainError("component index outside 1..k");
}

void ProblemSetup::require_estimable() const {
  validate();
  if (n <= k) throw DomainError("sigma-hat requires n > k");
}

DegreesOfFreedom ProblemSetup::residual_df() const {
  require_estimable();
  return DegreesOfFreedom(n - k);
}

double ProblemSetup::sqrt_n() const { return std::sqrt(static_cast<double>(n)); }

DesignMatrix::DesignMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.cols() < 1) throw DomainError("design matrix needs at least one column");
  if (values_.rows() < values_.cols()) throw DomainError("design matrix needs n >= k");
  if (!values_.allFinite()) throw DomainError("design matrix has non-finite entries");
  qr_.compute(values_);
  if (qr_.rank() < values_.cols()) throw DomainError("design matrix is rank deficient");

  // (X'X)^{-1} = P (R'R)^{-1} P'; its diagonal is the row norms of R^{-1}.
  const auto k = values_.cols();
  Eigen::MatrixXd r = qr_.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  Eigen::MatrixXd r_inv = Eigen::MatrixXd::Identity(k, k);
  r.triangularView<Eigen::Upper>().solveInPlace(r_inv);
  const Eigen::VectorXd permuted = r_inv.rowwise().squaredNorm();
  inverse_gram_diagonal_.resize(k);
  const auto& perm = qr_.colsPermutation().indices();
  for (Eigen::Index j = 0; j < k; ++j) inverse_gram_diagonal_(perm(j)) = permuted(j);
}

DesignMatrix DesignMatrix::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open design matrix file: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw DomainError("non-numeric design matrix entry: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DomainError("design matrix rows have unequal length");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("design matrix file is empty");
  Eigen::MatrixXd x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(i, j) = rows[i][j];
  return DesignMatrix(std::move(x));
}

DesignMatrix DesignMatrix::scaled_orthogonal(std::int64_t n, std::int64_t k) {
  if (k < 1 || n < k) throw DomainError("scaled_orthogonal: need n >= k >= 1");
  // Columns of a deterministic matrix orthonormalised, then scaled by sqrt(n).
  Eigen::MatrixXd seed(n, k);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < k; ++j)
      seed(i, j) = std::cos(0.7 * static_cast<double>((i + 1) * (j + 1)) + 0.3 * static_cast<double>(j));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  return DesignMatrix(q * std::sqrt(static_cast<double>(n)));
}

double DesignMatrix::xi(std::int64_t i) const {
  if (i < 1 || i > cols()) throw DomainError("component index outside 1..k");
  return std::sqrt(static_cast<double>(rows()) * inverse_gram_diagonal_(i - 1));
}

Eigen::VectorXd DesignMatrix::xi_all() const {
  return (static_cast<double>(rows()) * inverse_gram_diagonal_).cwiseSqrt();
}

Eigen::VectorXd DesignMatrix::solve(const Eigen::VectorXd& y) const {
  if (y.size() != rows()) throw DomainError("response length does not match design rows");
  return qr_.solve(y);
}

double compute_xi(const DesignMatrix& x, std::int64_t i) { return x.xi(i); }

LeastSquaresFit ls_fit(const DesignMatrix& x, const Eigen::VectorXd& y) {
  LeastSquaresFit fit;
  fit.coefficients = x.solve(y);
  if (x.rows() > x.cols()) {
    const Eigen::VectorXd resid = y - x.values() * fit.coefficients;
    fit.sigma_hat_sq = resid.squaredNorm() / static_cast<double>(x.rows() - x.cols());
  }
  return fit;
}

double standard_ls_interval(const ProblemSetup& setup, VarianceMode mode, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (mode == VarianceMode::known) {
    setup.validate();
    return setup.sigma * setup.xi * normal_quantile(1.0 - 0.5 * alpha) / setup.sqrt_n();
  }
  const DegreesOfFreedom m = setup.residual_df();
  return setup.xi * t_quantile(1.0 - 0.5 * alpha, m) / setup.sqrt_n();
}

}  // namespace thresholdci
