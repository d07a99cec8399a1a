#include <cmath>
#include <numbers>

#include "augmi/estimators.hpp"

namespace augmi {

FitResult fit_linear(const DesignMatrix& dm, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd& X = dm.X;
  const Eigen::Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw std::invalid_argument("fit_linear: length mismatch");
  if (n <= p) throw std::invalid_argument("fit_linear: need n > p");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) throw RankDeficientError("fit_linear: design is rank deficient");

  const Eigen::VectorXd beta = qr.solve(y);
  const double rss = (y - X * beta).squaredNorm();
  const double sigma2 = rss / static_cast<double>(n - p);
  const Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  FitResult fit;
  fit.labels = dm.labels;
  fit.coefficients = beta;
  fit.standard_errors = (sigma2 * xtx_inv.diagonal().array()).sqrt();
  const double sigma2_mle = rss / static_cast<double>(n);
  fit.loglik = sigma2_mle > 0
                   ? -0.5 * static_cast<double>(n) *
                         (std::log(2.0 * std::numbers::pi * sigma2_mle) + 1.0)
                   : 0.0;
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

}  // namespace augmi
