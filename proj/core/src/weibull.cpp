#include <cmath>
#include <limits>

#include "augmi/estimators.hpp"

namespace augmi {

namespace {

struct WeibullWork {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& entry;
  const Eigen::VectorXd& exit;
  const Eigen::VectorXd& status;
  Eigen::VectorXd log_exit;
  Eigen::VectorXd log_entry;  // only meaningful where entry > 0

  WeibullWork(const Eigen::MatrixXd& X_, const Eigen::VectorXd& entry_,
              const Eigen::VectorXd& exit_, const Eigen::VectorXd& status_)
      : X(X_), entry(entry_), exit(exit_), status(status_) {
    log_exit = exit.array().log();
    log_entry.resize(entry.size());
    for (Eigen::Index i = 0; i < entry.size(); ++i)
      log_entry[i] = entry[i] > 0.0 ? std::log(entry[i]) : 0.0;
  }
};

double loglik_at(const WeibullWork& w, const Eigen::VectorXd& theta) {
  const Eigen::Index n = w.X.rows(), p = w.X.cols();
  const double u = theta[0], v = theta[1];
  const double a = std::exp(u);
  const Eigen::VectorXd lp = p > 0 ? (w.X * theta.tail(p)).eval()
                                   : Eigen::VectorXd::Zero(n).eval();
  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lt = w.log_exit[i] - v;
    const double P = std::exp(a * lt);
    const double Q = w.entry[i] > 0.0 ? std::exp(a * (w.log_entry[i] - v)) : 0.0;
    const double g = std::exp(lp[i]);
    ll += w.status[i] * (u - a * v + (a - 1.0) * w.log_exit[i] + lp[i]) - g * (P - Q);
  }
  return ll;
}

void score_hessian_at(const WeibullWork& w, const Eigen::VectorXd& theta,
                      Eigen::VectorXd* score, Eigen::MatrixXd* hess) {
  const Eigen::Index n = w.X.rows(), p = w.X.cols();
  const double u = theta[0], v = theta[1];
  const double a = std::exp(u);
  const Eigen::VectorXd lp = p > 0 ? (w.X * theta.tail(p)).eval()
                                   : Eigen::VectorXd::Zero(n).eval();
  const Eigen::Index dim = 2 + p;
  if (score) score->setZero(dim);
  if (hess) hess->setZero(dim, dim);
  Eigen::VectorXd gH(n), gR(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lt = w.log_exit[i] - v;
    const double P = std::exp(a * lt);
    double Q = 0.0, lw = 0.0;
    if (w.entry[i] > 0.0) {
      lw = w.log_entry[i] - v;
      Q = std::exp(a * lw);
    }
    const double g = std::exp(lp[i]);
    const double H = P - Q;
    const double R = P * lt - Q * lw;
    const double S = P * lt * lt - Q * lw * lw;
    const double D = w.status[i] - g * H;
    gH[i] = g * H;
    gR[i] = g * R;
    if (score) {
      (*score)[0] += w.status[i] * (1.0 + a * lt) - g * a * R;
      (*score)[1] += -a * D;
    }
    if (hess) {
      (*hess)(0, 0) += w.status[i] * a * lt - g * a * R - g * a * a * S;
      (*hess)(0, 1) += -a * D + a * a * g * R;
      (*hess)(1, 1) += -a * a * g * H;
    }
  }
  if (p > 0) {
    const Eigen::VectorXd D =
        w.status - gH;  // per-row martingale residuals
    if (score) score->tail(p) = w.X.transpose() * D;
    if (hess) {
      hess->block(0, 2, 1, p) = (-a * (w.X.transpose() * gR)).transpose();
      hess->block(1, 2, 1, p) = (a * (w.X.transpose() * gH)).transpose();
      hess->block(2, 2, p, p) = -(w.X.transpose() * gH.asDiagonal() * w.X);
    }
  }
  if (hess) {
    (*hess)(1, 0) = (*hess)(0, 1);
    if (p > 0) {
      hess->block(2, 0, p, 1) = hess->block(0, 2, 1, p).transpose();
      hess->block(2, 1, p, 1) = hess->block(1, 2, 1, p).transpose();
    }
  }
}

}  // namespace

double weibull_lt_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& entry,
                         const Eigen::VectorXd& exit, const Eigen::VectorXd& status,
                         const Eigen::VectorXd& theta) {
  WeibullWork w(X, entry, exit, status);
  return loglik_at(w, theta);
}

Eigen::VectorXd weibull_lt_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& entry,
                                    const Eigen::VectorXd& exit,
                                    const Eigen::VectorXd& status,
                                    const Eigen::VectorXd& theta) {
  WeibullWork w(X, entry, exit, status);
  Eigen::VectorXd score;
  score_hessian_at(w, theta, &score, nullptr);
  return score;
}

FitResult fit_weibull_lt(const DesignMatrix& dm, const Eigen::VectorXd& entry,
                         const Eigen::VectorXd& exit, const Eigen::VectorXd& status,
                         const WeibullControls& controls) {
  const Eigen::MatrixXd& X = dm.X;
  const Eigen::Index n = exit.size(), p = X.cols();
  if (entry.size() != n || status.size() != n || (p > 0 && X.rows() != n))
    throw std::invalid_argument("fit_weibull_lt: length mismatch");
  if (n == 0) throw std::invalid_argument("fit_weibull_lt: empty input");
  double n_events = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(entry[i] >= 0.0) || !(entry[i] < exit[i]))
      throw std::invalid_argument("fit_weibull_lt: need 0 <= entry < exit rowwise");
    if (status[i] != 0.0 && status[i] != 1.0)
      throw std::invalid_argument("fit_weibull_lt: status not in {0,1}");
    n_events += status[i];
  }
  if (n_events == 0.0) throw std::invalid_argument("fit_weibull_lt: no events");
  if (p > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p)
      throw RankDeficientError("fit_weibull_lt: design is rank deficient");
  }

  WeibullWork w(X, entry, exit, status);
  const bool fix_shape = controls.fixed_shape.has_value();
  const Eigen::Index dim = 2 + p;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  if (fix_shape) {
    theta[0] = std::log(*controls.fixed_shape);
  } else {
    // moment start from event log-times
    double mean_lt = 0.0, var_lt = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (status[i] == 1.0) mean_lt += w.log_exit[i];
    mean_lt /= n_events;
    for (Eigen::Index i = 0; i < n; ++i)
      if (status[i] == 1.0) var_lt += (w.log_exit[i] - mean_lt) * (w.log_exit[i] - mean_lt);
    var_lt /= std::max(n_events - 1.0, 1.0);
    const double a0 =
        var_lt > 1e-12 ? std::clamp(1.2825 / std::sqrt(var_lt), 0.2, 50.0) : 1.0;
    theta[0] = std::log(a0);
  }
  theta[1] = std::log(exit.mean());

  double ll = loglik_at(w, theta);
  Eigen::VectorXd score;
  Eigen::MatrixXd hess;
  bool converged = false;
  int iter = 0;
  for (; iter < controls.max_iterations; ++iter) {
    score_hessian_at(w, theta, &score, &hess);
    if (fix_shape) {
      score[0] = 0.0;
      hess.row(0).setZero();
      hess.col(0).setZero();
      hess(0, 0) = -1.0;  // pins the fixed coordinate
    }
    if (score.lpNorm<Eigen::Infinity>() < controls.grad_tol) {
      converged = true;
      break;
    }
    Eigen::MatrixXd A = -hess;
    double damping = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    int tries = 0;
    while (llt.info() != Eigen::Success && tries < 25) {
      damping = damping == 0.0 ? 1e-6 * (1.0 + A.diagonal().cwiseAbs().maxCoeff())
                               : damping * 10.0;
      Eigen::MatrixXd Ad = A;
      Ad.diagonal().array() += damping;
      llt.compute(Ad);
      ++tries;
    }
    if (llt.info() != Eigen::Success)
      throw ConvergenceError("fit_weibull_lt: Hessian not negative definite");
    Eigen::VectorXd step = llt.solve(score);
    if (fix_shape) step[0] = 0.0;
    double scale = 1.0;
    double ll_new = loglik_at(w, theta + step);
    int halvings = 0;
    while ((!std::isfinite(ll_new) || ll_new < ll) && halvings < 40) {
      scale *= 0.5;
      ll_new = loglik_at(w, theta + scale * step);
      ++halvings;
    }
    if (!std::isfinite(ll_new) || ll_new < ll)
      throw ConvergenceError("fit_weibull_lt: line search failed");
    theta += scale * step;
    ll = ll_new;
  }
  if (!converged)
    throw ConvergenceError("fit_weibull_lt: no convergence in " +
                           std::to_string(controls.max_iterations) + " iterations");

  score_hessian_at(w, theta, &score, &hess);
  Eigen::MatrixXd A = -hess;
  if (fix_shape) {
    A.row(0).setZero();
    A.col(0).setZero();
    A(0, 0) = std::numeric_limits<double>::infinity();  // SE of the fixed shape = 0
  }
  Eigen::MatrixXd cov;
  if (fix_shape) {
    cov = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::Index d2 = dim - 1;
    Eigen::MatrixXd Ar = A.bottomRightCorner(d2, d2);
    cov.bottomRightCorner(d2, d2) = Ar.ldlt().solve(Eigen::MatrixXd::Identity(d2, d2));
  } else {
    cov = A.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
  }

  FitResult fit;
  fit.labels.reserve(static_cast<std::size_t>(dim));
  fit.labels.emplace_back("log_shape");
  fit.labels.emplace_back("log_scale");
  for (const auto& l : dm.labels) fit.labels.push_back(l);
  fit.coefficients = theta;
  fit.standard_errors = cov.diagonal().array().max(0.0).sqrt();
  fit.loglik = ll;
  fit.converged = true;
  fit.iterations = iter + 1;
  return fit;
}

}  // namespace augmi
