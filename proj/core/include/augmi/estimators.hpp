#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "augmi/design.hpp"
#include "augmi/table.hpp"

namespace augmi {

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankDeficientError : EstimationError {
  using EstimationError::EstimationError;
};
struct SeparationError : EstimationError {
  using EstimationError::EstimationError;
};
struct ConvergenceError : EstimationError {
  using EstimationError::EstimationError;
};

struct FitResult {
  std::vector<std::string> labels;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;

  double coef(std::string_view label) const;
  double se(std::string_view label) const;
};

struct GlmControls {
  double score_tol = 1e-8;
  double loglik_rel_tol = 1e-10;
  int max_iterations = 50;
  double separation_bound = 30.0;  // |coef| beyond this reports separation
  double ridge = 0.0;              // L2 penalty; > 0 disables the separation check
};

// Maximum-likelihood logistic regression via iteratively reweighted least
// squares; standard errors from the inverse observed information.
FitResult fit_logistic(const DesignMatrix& dm, const Eigen::VectorXd& y,
                       const GlmControls& controls = {});

// Baseline-category multinomial logit by full Newton; y holds 0-based level
// indices with level 0 the reference.  Coefficient labels are
// "<level>:<column>" per non-reference level block.
FitResult fit_multinomial(const DesignMatrix& dm, const std::vector<int>& y,
                          int n_levels, const std::vector<std::string>& level_names,
                          const GlmControls& controls = {});
// Convenience wrapper over a categorical column; ref_level defaults to the
// first declared level.
FitResult fit_multinomial(const DesignMatrix& dm, const Column& y,
                          std::string_view ref_level = {},
                          const GlmControls& controls = {});

// Ordinary least squares; residual variance on n - p degrees of freedom.
FitResult fit_linear(const DesignMatrix& dm, const Eigen::VectorXd& y);

struct WeibullControls {
  double grad_tol = 1e-8;
  int max_iterations = 200;
  std::optional<double> fixed_shape;  // constrain the shape (e.g. 1 = exponential)
};

// Left-truncated Weibull proportional-hazards regression over
// (log shape, log scale, beta); no intercept in beta (absorbed by the scale).
// Labels "log_shape", "log_scale", then design labels.
FitResult fit_weibull_lt(const DesignMatrix& dm, const Eigen::VectorXd& entry,
                         const Eigen::VectorXd& exit, const Eigen::VectorXd& status,
                         const WeibullControls& controls = {});

// Log-likelihood and analytic gradient of the model above at
// theta = (log shape, log scale, beta); exposed for gradient checks.
double weibull_lt_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& entry,
                         const Eigen::VectorXd& exit, const Eigen::VectorXd& status,
                         const Eigen::VectorXd& theta);
Eigen::VectorXd weibull_lt_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& entry,
                                    const Eigen::VectorXd& exit,
                                    const Eigen::VectorXd& status,
                                    const Eigen::VectorXd& theta);

// Tie-corrected Kendall tau-b over complete pairs, O(n log n).
// Throws EstimationError when fewer than 2 complete pairs remain or either
// margin has zero variance.
double kendall_tau(std::span<const double> x, std::span<const double> y);
// Drops pairs with a MISSING member; categorical columns compare by level index.
double kendall_tau(const Column& x, const Column& y);

// Nelson-Aalen cumulative hazard with delayed entry: risk set at event time s
// is {i : entry_i < s <= exit_i}.  Returns per row H(exit_i) - H(entry_i).
std::vector<double> nelson_aalen(std::span<const double> entry,
                                 std::span<const double> exit,
                                 std::span<const double> status);

}  // namespace augmi
