#include <doctest.h>

#include <cmath>
#include <numeric>

#include "augmi/design.hpp"
#include "augmi/estimators.hpp"
#include "augmi/rng.hpp"
#include "augmi/simgen.hpp"

using namespace augmi;

namespace {

DesignMatrix matrix_of(std::vector<std::vector<double>> rows,
                       std::vector<std::string> labels) {
  DesignMatrix dm;
  dm.X.resize(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      dm.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  dm.labels = std::move(labels);
  return dm;
}

}  // namespace

TEST_CASE("ols interpolates exact linear data") {
  const DesignMatrix dm =
      matrix_of({{1, 0}, {1, 1}, {1, 2}, {1, 3}}, {"intercept", "x"});
  Eigen::VectorXd y(4);
  y << 3, 5, 7, 9;  // y = 3 + 2x
  const FitResult fit = fit_linear(dm, y);
  CHECK(fit.coef("intercept") == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.coef("x") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.se("x") == doctest::Approx(0.0));
}

TEST_CASE("ols on the 3-point example") {
  // (0,0), (1,1), (2,4): slope 2, intercept -1/3
  const DesignMatrix dm = matrix_of({{1, 0}, {1, 1}, {1, 2}}, {"intercept", "x"});
  Eigen::VectorXd y(3);
  y << 0, 1, 4;
  const FitResult fit = fit_linear(dm, y);
  CHECK(std::abs(fit.coef("x") - 2.0) < 1e-9);
  CHECK(std::abs(fit.coef("intercept") - (-1.0 / 3.0)) < 1e-9);
}

TEST_CASE("ols is invariant to row permutation") {
  RngStream rng(21, 0);
  DesignMatrix dm = matrix_of({}, {"intercept", "x", "z"});
  dm.X.resize(50, 3);
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) {
    dm.X(i, 0) = 1.0;
    dm.X(i, 1) = rng.normal();
    dm.X(i, 2) = rng.normal();
    y[i] = 1.0 + 0.5 * dm.X(i, 1) - 0.25 * dm.X(i, 2) + rng.normal();
  }
  const FitResult fit = fit_linear(dm, y);
  DesignMatrix rev = dm;
  Eigen::VectorXd yrev(50);
  for (int i = 0; i < 50; ++i) {
    rev.X.row(i) = dm.X.row(49 - i);
    yrev[i] = y[49 - i];
  }
  const FitResult fit2 = fit_linear(rev, yrev);
  for (int j = 0; j < 3; ++j)
    CHECK(fit.coefficients[j] == doctest::Approx(fit2.coefficients[j]).epsilon(1e-12));
}

TEST_CASE("ols rejects rank-deficient designs") {
  const DesignMatrix dm =
      matrix_of({{1, 2, 4}, {1, 3, 6}, {1, 5, 10}, {1, 7, 14}}, {"intercept", "x", "2x"});
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  CHECK_THROWS_AS(fit_linear(dm, y), RankDeficientError);
}

TEST_CASE("intercept-only logistic equals the sample logit") {
  DesignMatrix dm;
  dm.X = Eigen::MatrixXd::Ones(100, 1);
  dm.labels = {"intercept"};
  Eigen::VectorXd y = Eigen::VectorXd::Zero(100);
  for (int i = 0; i < 30; ++i) y[i] = 1.0;
  const FitResult fit = fit_logistic(dm, y);
  CHECK(std::abs(fit.coef("intercept") - std::log(0.3 / 0.7)) < 1e-6);
  CHECK(fit.converged);
}

TEST_CASE("binary-covariate slope equals the 2x2 log odds ratio") {
  // table: x=0 -> 40 ones / 60 zeros; x=1 -> 70 ones / 30 zeros
  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  auto add = [&](double x, double y, int count) {
    for (int i = 0; i < count; ++i) {
      rows.push_back({1.0, x});
      ys.push_back(y);
    }
  };
  add(0, 1, 40);
  add(0, 0, 60);
  add(1, 1, 70);
  add(1, 0, 30);
  const DesignMatrix dm = matrix_of(rows, {"intercept", "x"});
  Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < ys.size(); ++i) y[static_cast<Eigen::Index>(i)] = ys[i];
  const FitResult fit = fit_logistic(dm, y);
  const double log_or = std::log((70.0 / 30.0) / (40.0 / 60.0));
  CHECK(std::abs(fit.coef("x") - log_or) < 1e-8);
}

TEST_CASE("logistic score vanishes at the reported optimum") {
  RngStream rng(2, 2);
  Dataset ds = gen_covariates(5000, rng);
  const Dataset out = gen_binary_outcome(ds, BinaryOutcomeParams{}, rng);
  const DesignMatrix dm = DesignMatrix::build(out, {"x1", "x2", "x3", "x4", "x5"}, true);
  Eigen::VectorXd y(5000);
  for (int i = 0; i < 5000; ++i) y[i] = out.column("y").values[static_cast<std::size_t>(i)];
  const FitResult fit = fit_logistic(dm, y);
  Eigen::VectorXd p(5000);
  const Eigen::VectorXd eta = dm.X * fit.coefficients;
  for (int i = 0; i < 5000; ++i) p[i] = 1.0 / (1.0 + std::exp(-eta[i]));
  const Eigen::VectorXd score = dm.X.transpose() * (y - p);
  CHECK(score.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("logistic recovers generating coefficients at n = 20000") {
  RngStream rng(77, 1);
  Dataset ds = gen_covariates(20000, rng);
  const Dataset out = gen_binary_outcome(ds, BinaryOutcomeParams{}, rng);
  const DesignMatrix dm = DesignMatrix::build(out, {"x1", "x2", "x3", "x4", "x5"}, true);
  Eigen::VectorXd y(20000);
  for (int i = 0; i < 20000; ++i) y[i] = out.column("y").values[static_cast<std::size_t>(i)];
  const FitResult fit = fit_logistic(dm, y);
  const std::vector<std::pair<std::string, double>> truth{
      {"intercept", -1.0}, {"x1", 0.05},          {"x2", 0.2},
      {"x3", 0.1},         {"x4", 0.02},          {"x5.2", std::log(5.0)},
      {"x5.3", std::log(2.0)}, {"x5.4", std::log(1.5)}};
  for (const auto& [label, value] : truth)
    CHECK(std::abs(fit.coef(label) - value) < 3.0 * fit.se(label));
}

TEST_CASE("logistic error paths") {
  DesignMatrix dm;
  dm.X = Eigen::MatrixXd::Ones(10, 1);
  dm.labels = {"intercept"};
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(10);
  CHECK_THROWS_AS(fit_logistic(dm, ones), std::invalid_argument);  // single class

  // perfectly separated data
  DesignMatrix sep = matrix_of({}, {"intercept", "x"});
  sep.X.resize(40, 2);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    sep.X(i, 0) = 1.0;
    sep.X(i, 1) = i < 20 ? -1.0 - i * 0.05 : 1.0 + i * 0.05;
    y[i] = i < 20 ? 0.0 : 1.0;
  }
  CHECK_THROWS_AS(fit_logistic(sep, y), SeparationError);

  // duplicated column
  DesignMatrix dup = matrix_of({}, {"intercept", "x", "x2"});
  dup.X.resize(30, 3);
  RngStream rng(5, 5);
  Eigen::VectorXd yy(30);
  for (int i = 0; i < 30; ++i) {
    dup.X(i, 0) = 1.0;
    dup.X(i, 1) = rng.normal();
    dup.X(i, 2) = dup.X(i, 1);
    yy[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  CHECK_THROWS_AS(fit_logistic(dup, yy), RankDeficientError);
}
