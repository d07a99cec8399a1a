#include <doctest.h>

#include <cmath>

#include "augmi/design.hpp"
#include "augmi/estimators.hpp"
#include "augmi/rng.hpp"
#include "augmi/simgen.hpp"

using namespace augmi;

TEST_CASE("intercept-only multinomial equals log count ratios") {
  DesignMatrix dm;
  dm.X = Eigen::MatrixXd::Ones(100, 1);
  dm.labels = {"intercept"};
  std::vector<int> y;
  for (int j : {0, 1, 2, 3})
    for (int i = 0; i < (j == 0 ? 50 : j == 1 ? 10 : j == 2 ? 30 : 10); ++i) y.push_back(j);
  const FitResult fit = fit_multinomial(dm, y, 4, {"1", "2", "3", "4"});
  CHECK(std::abs(fit.coef("2:intercept") - std::log(10.0 / 50.0)) < 1e-6);
  CHECK(std::abs(fit.coef("3:intercept") - std::log(30.0 / 50.0)) < 1e-6);
  CHECK(std::abs(fit.coef("4:intercept") - std::log(10.0 / 50.0)) < 1e-6);
}

TEST_CASE("two-category multinomial degenerates to logistic") {
  RngStream rng(31, 0);
  DesignMatrix dm;
  dm.X.resize(400, 2);
  dm.labels = {"intercept", "x"};
  Eigen::VectorXd ylog(400);
  std::vector<int> ycat(400);
  for (int i = 0; i < 400; ++i) {
    dm.X(i, 0) = 1.0;
    dm.X(i, 1) = rng.normal();
    const double p = 1.0 / (1.0 + std::exp(-(0.3 + 0.8 * dm.X(i, 1))));
    const int yi = rng.bernoulli(p) ? 1 : 0;
    ylog[i] = yi;
    ycat[static_cast<std::size_t>(i)] = yi;
  }
  const FitResult lg = fit_logistic(dm, ylog);
  const FitResult mn = fit_multinomial(dm, ycat, 2, {"0", "1"});
  CHECK(std::abs(mn.coef("1:intercept") - lg.coef("intercept")) < 1e-6);
  CHECK(std::abs(mn.coef("1:x") - lg.coef("x")) < 1e-6);
}

TEST_CASE("multinomial recovers the x5 generator at n = 20000") {
  RngStream rng(41, 0);
  const Dataset ds = gen_covariates(20000, rng);
  const DesignMatrix dm = DesignMatrix::build(ds, {"x1", "x2", "x3", "x4"}, true);
  const FitResult fit = fit_multinomial(dm, ds.column("x5"), "1");

  // generating blocks: l2 = -2 + .5 x1 + .2 x2 + .1 x3 + .2 x4; l3 same with 0; l4 = l2
  const std::vector<std::pair<std::string, double>> truth{
      {"2:intercept", -2.0}, {"2:x1", 0.5}, {"2:x2", 0.2}, {"2:x3", 0.1}, {"2:x4", 0.2},
      {"3:intercept", 0.0},  {"3:x1", 0.5}, {"3:x2", 0.2}, {"3:x3", 0.1}, {"3:x4", 0.2},
      {"4:intercept", -2.0}, {"4:x1", 0.5}, {"4:x2", 0.2}, {"4:x3", 0.1}, {"4:x4", 0.2}};
  for (const auto& [label, value] : truth)
    CHECK(std::abs(fit.coef(label) - value) < 3.0 * fit.se(label));
}

TEST_CASE("empty category is rejected") {
  DesignMatrix dm;
  dm.X = Eigen::MatrixXd::Ones(10, 1);
  dm.labels = {"intercept"};
  std::vector<int> y(10, 0);
  y[0] = 2;  // category 1 empty
  CHECK_THROWS_AS(fit_multinomial(dm, y, 3, {"a", "b", "c"}), std::invalid_argument);
}

TEST_CASE("reference level can be chosen by label") {
  Column x5 = make_categorical("x5", {"1", "2", "3", "4"}, {0, 1, 2, 3, 0, 1, 2, 3, 0, 2});
  DesignMatrix dm;
  dm.X = Eigen::MatrixXd::Ones(10, 1);
  dm.labels = {"intercept"};
  const FitResult fit = fit_multinomial(dm, x5, "3");
  // counts: 1 -> 3, 2 -> 2, 3 -> 3, 4 -> 2 with reference "3"
  CHECK(std::abs(fit.coef("1:intercept") - std::log(3.0 / 3.0)) < 1e-6);
  CHECK(std::abs(fit.coef("2:intercept") - std::log(2.0 / 3.0)) < 1e-6);
  CHECK(std::abs(fit.coef("4:intercept") - std::log(2.0 / 3.0)) < 1e-6);
}
