#include <cmath>

#include "augmi/estimators.hpp"

namespace augmi {

namespace {

// Row probabilities for baseline-category logit; theta is (J-1) x p blocks
// flattened block-major (block j = level j+1), reference level 0.
void category_probs(const Eigen::MatrixXd& X, const Eigen::VectorXd& theta, int n_levels,
                    Eigen::MatrixXd& probs) {
  const Eigen::Index n = X.rows(), p = X.cols();
  probs.resize(n, n_levels);
  probs.col(0).setZero();
  for (int j = 1; j < n_levels; ++j)
    probs.col(j) = X * theta.segment(static_cast<Eigen::Index>(j - 1) * p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = probs.row(i).maxCoeff();
    double denom = 0.0;
    for (int j = 0; j < n_levels; ++j) {
      probs(i, j) = std::exp(probs(i, j) - mx);
      denom += probs(i, j);
    }
    probs.row(i) /= denom;
  }
}

double multinomial_loglik(const Eigen::MatrixXd& X, const std::vector<int>& y,
                          const Eigen::VectorXd& theta, int n_levels, double ridge) {
  Eigen::MatrixXd probs;
  category_probs(X, theta, n_levels, probs);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    ll += std::log(probs(i, y[static_cast<std::size_t>(i)]));
  if (ridge > 0) ll -= 0.5 * ridge * theta.squaredNorm();
  return ll;
}

}  // namespace

FitResult fit_multinomial(const DesignMatrix& dm, const std::vector<int>& y,
                          int n_levels, const std::vector<std::string>& level_names,
                          const GlmControls& controls) {
  const Eigen::MatrixXd& X = dm.X;
  const Eigen::Index n = X.rows(), p = X.cols();
  if (static_cast<Eigen::Index>(y.size()) != n)
    throw std::invalid_argument("fit_multinomial: length mismatch");
  if (n_levels < 2) throw std::invalid_argument("fit_multinomial: need >= 2 levels");
  std::vector<int> counts(static_cast<std::size_t>(n_levels), 0);
  for (int v : y) {
    if (v < 0 || v >= n_levels)
      throw std::invalid_argument("fit_multinomial: level index out of range");
    ++counts[static_cast<std::size_t>(v)];
  }
  if (controls.ridge <= 0.0) {
    for (int j = 0; j < n_levels; ++j)
      if (counts[static_cast<std::size_t>(j)] == 0)
        throw std::invalid_argument("fit_multinomial: empty category " +
                                    (static_cast<std::size_t>(j) < level_names.size()
                                         ? level_names[static_cast<std::size_t>(j)]
                                         : std::to_string(j)));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p)
      throw RankDeficientError("fit_multinomial: design is rank deficient");
  }

  const Eigen::Index dim = static_cast<Eigen::Index>(n_levels - 1) * p;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  double ll = multinomial_loglik(X, y, theta, n_levels, controls.ridge);
  Eigen::MatrixXd probs, hess(dim, dim);
  Eigen::VectorXd score(dim);
  bool converged = false;
  int iter = 0;
  for (; iter < controls.max_iterations; ++iter) {
    category_probs(X, theta, n_levels, probs);
    for (int j = 1; j < n_levels; ++j) {
      Eigen::VectorXd resid = -probs.col(j);
      for (Eigen::Index i = 0; i < n; ++i)
        if (y[static_cast<std::size_t>(i)] == j) resid[i] += 1.0;
      score.segment(static_cast<Eigen::Index>(j - 1) * p, p) = X.transpose() * resid;
    }
    if (controls.ridge > 0) score -= controls.ridge * theta;
    if (score.lpNorm<Eigen::Infinity>() < controls.score_tol) {
      converged = true;
      break;
    }
    for (int j = 1; j < n_levels; ++j) {
      for (int k = j; k < n_levels; ++k) {
        Eigen::VectorXd w = j == k
                                ? probs.col(j).cwiseProduct(
                                      (1.0 - probs.col(k).array()).matrix())
                                : (-probs.col(j).cwiseProduct(probs.col(k))).eval();
        const Eigen::MatrixXd block = X.transpose() * w.asDiagonal() * X;
        hess.block(static_cast<Eigen::Index>(j - 1) * p,
                   static_cast<Eigen::Index>(k - 1) * p, p, p) = block;
        if (k != j)
          hess.block(static_cast<Eigen::Index>(k - 1) * p,
                     static_cast<Eigen::Index>(j - 1) * p, p, p) = block.transpose();
      }
    }
    if (controls.ridge > 0) hess.diagonal().array() += controls.ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    if (ldlt.info() != Eigen::Success)
      throw RankDeficientError("fit_multinomial: singular information matrix");
    const Eigen::VectorXd step = ldlt.solve(score);
    double scale = 1.0;
    double ll_new = multinomial_loglik(X, y, theta + step, n_levels, controls.ridge);
    int halvings = 0;
    while (ll_new < ll && halvings < 30) {
      scale *= 0.5;
      ll_new = multinomial_loglik(X, y, theta + scale * step, n_levels, controls.ridge);
      ++halvings;
    }
    theta += scale * step;
    if (controls.ridge <= 0 &&
        theta.lpNorm<Eigen::Infinity>() > controls.separation_bound)
      throw SeparationError("fit_multinomial: perfect separation suspected");
    const double rel = std::abs(ll_new - ll) / (std::abs(ll) + 1.0);
    ll = ll_new;
    if (rel < controls.loglik_rel_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    if (controls.ridge <= 0)
      throw SeparationError("fit_multinomial: no convergence in " +
                            std::to_string(controls.max_iterations) + " iterations");
    throw ConvergenceError("fit_multinomial: ridge fit did not converge");
  }

  // information at the optimum for standard errors
  category_probs(X, theta, n_levels, probs);
  for (int j = 1; j < n_levels; ++j) {
    for (int k = j; k < n_levels; ++k) {
      Eigen::VectorXd w = j == k
                              ? probs.col(j).cwiseProduct(
                                    (1.0 - probs.col(k).array()).matrix())
                              : (-probs.col(j).cwiseProduct(probs.col(k))).eval();
      const Eigen::MatrixXd block = X.transpose() * w.asDiagonal() * X;
      hess.block(static_cast<Eigen::Index>(j - 1) * p,
                 static_cast<Eigen::Index>(k - 1) * p, p, p) = block;
      if (k != j)
        hess.block(static_cast<Eigen::Index>(k - 1) * p,
                   static_cast<Eigen::Index>(j - 1) * p, p, p) = block.transpose();
    }
  }
  if (controls.ridge > 0) hess.diagonal().array() += controls.ridge;
  const Eigen::MatrixXd cov = hess.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));

  FitResult fit;
  fit.labels.reserve(static_cast<std::size_t>(dim));
  for (int j = 1; j < n_levels; ++j) {
    const std::string lev = static_cast<std::size_t>(j) < level_names.size()
                                ? level_names[static_cast<std::size_t>(j)]
                                : std::to_string(j);
    for (const auto& lbl : dm.labels) fit.labels.push_back(lev + ":" + lbl);
  }
  fit.coefficients = theta;
  fit.standard_errors = cov.diagonal().array().sqrt();
  fit.loglik = multinomial_loglik(X, y, theta, n_levels, 0.0);
  fit.converged = true;
  fit.iterations = iter + 1;
  return fit;
}

FitResult fit_multinomial(const DesignMatrix& dm, const Column& y,
                          std::string_view ref_level, const GlmControls& controls) {
  if (y.kind != ColumnKind::categorical)
    throw std::invalid_argument("fit_multinomial: response must be categorical");
  const int n_levels = static_cast<int>(y.levels.size());
  // remap so the reference level is index 0
  int ref = 0;
  if (!ref_level.empty()) {
    ref = -1;
    for (int j = 0; j < n_levels; ++j)
      if (y.levels[static_cast<std::size_t>(j)] == ref_level) ref = j;
    if (ref < 0)
      throw std::invalid_argument("fit_multinomial: unknown reference level " +
                                  std::string(ref_level));
  }
  std::vector<int> remap(static_cast<std::size_t>(n_levels));
  std::vector<std::string> names;
  names.push_back(y.levels[static_cast<std::size_t>(ref)]);
  int next = 1;
  for (int j = 0; j < n_levels; ++j) {
    if (j == ref) {
      remap[static_cast<std::size_t>(j)] = 0;
    } else {
      remap[static_cast<std::size_t>(j)] = next++;
      names.push_back(y.levels[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<int> yi(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y.is_missing(i))
      throw std::invalid_argument("fit_multinomial: response has missing cells");
    yi[i] = remap[static_cast<std::size_t>(y.level_index(i))];
  }
  return fit_multinomial(dm, yi, n_levels, names, controls);
}

}  // namespace augmi
