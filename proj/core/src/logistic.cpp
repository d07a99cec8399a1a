#include <cmath>

#include "augmi/estimators.hpp"

namespace augmi {

namespace {

double logistic_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    // log(p) for y=1, log(1-p) for y=0, numerically stable form
    const double e = eta[i];
    ll += y[i] * e - (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)));
  }
  if (ridge > 0) ll -= 0.5 * ridge * beta.squaredNorm();
  return ll;
}

}  // namespace

FitResult fit_logistic(const DesignMatrix& dm, const Eigen::VectorXd& y,
                       const GlmControls& controls) {
  const Eigen::MatrixXd& X = dm.X;
  const Eigen::Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw std::invalid_argument("fit_logistic: length mismatch");
  if (n <= p) throw std::invalid_argument("fit_logistic: need n > p");
  for (Eigen::Index i = 0; i < n; ++i)
    if (y[i] != 0.0 && y[i] != 1.0)
      throw std::invalid_argument("fit_logistic: response not in {0,1}");
  if (controls.ridge <= 0.0) {
    const double mean = y.mean();
    if (mean == 0.0 || mean == 1.0)
      throw std::invalid_argument("fit_logistic: response has a single class");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) throw RankDeficientError("fit_logistic: design is rank deficient");
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = logistic_loglik(X, y, beta, controls.ridge);
  Eigen::VectorXd p_hat(n), w(n);
  Eigen::MatrixXd info(p, p);
  bool converged = false;
  int iter = 0;
  for (; iter < controls.max_iterations; ++iter) {
    const Eigen::VectorXd eta = X * beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      p_hat[i] = 1.0 / (1.0 + std::exp(-eta[i]));
      w[i] = p_hat[i] * (1.0 - p_hat[i]);
    }
    Eigen::VectorXd score = X.transpose() * (y - p_hat);
    if (controls.ridge > 0) score -= controls.ridge * beta;
    if (score.lpNorm<Eigen::Infinity>() < controls.score_tol) {
      converged = true;
      break;
    }
    info = X.transpose() * w.asDiagonal() * X;
    if (controls.ridge > 0) info.diagonal().array() += controls.ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success)
      throw RankDeficientError("fit_logistic: singular information matrix");
    const Eigen::VectorXd step = ldlt.solve(score);
    double scale = 1.0;
    double ll_new = logistic_loglik(X, y, beta + step, controls.ridge);
    int halvings = 0;
    while (ll_new < ll && halvings < 30) {
      scale *= 0.5;
      ll_new = logistic_loglik(X, y, beta + scale * step, controls.ridge);
      ++halvings;
    }
    beta += scale * step;
    if (controls.ridge <= 0 &&
        beta.lpNorm<Eigen::Infinity>() > controls.separation_bound)
      throw SeparationError("fit_logistic: perfect separation suspected");
    const double rel = std::abs(ll_new - ll) / (std::abs(ll) + 1.0);
    ll = ll_new;
    if (rel < controls.loglik_rel_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    if (controls.ridge <= 0)
      throw SeparationError("fit_logistic: no convergence in " +
                            std::to_string(controls.max_iterations) + " iterations");
    throw ConvergenceError("fit_logistic: ridge fit did not converge");
  }

  const Eigen::VectorXd eta = X * beta;
  for (Eigen::Index i = 0; i < n; ++i) {
    p_hat[i] = 1.0 / (1.0 + std::exp(-eta[i]));
    w[i] = p_hat[i] * (1.0 - p_hat[i]);
  }
  info = X.transpose() * w.asDiagonal() * X;
  if (controls.ridge > 0) info.diagonal().array() += controls.ridge;
  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  FitResult fit;
  fit.labels = dm.labels;
  fit.coefficients = beta;
  fit.standard_errors = cov.diagonal().array().sqrt();
  fit.loglik = logistic_loglik(X, y, beta, 0.0);
  fit.converged = true;
  fit.iterations = iter + 1;
  return fit;
}

}  // namespace augmi
