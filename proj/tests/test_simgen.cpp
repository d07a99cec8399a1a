#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "augmi/rng.hpp"
#include "augmi/simgen.hpp"

using namespace augmi;

namespace {

double column_mean(const Column& c) {
  double s = 0.0;
  for (double v : c.values) s += v;
  return s / static_cast<double>(c.size());
}

}  // namespace

TEST_CASE("covariate marginals at n = 100000") {
  RngStream rng(2023, 0);
  const Dataset ds = gen_covariates(100000, rng);

  CHECK(std::abs(column_mean(ds.column("x1")) - 2.0) < 0.02);
  CHECK(std::abs(column_mean(ds.column("x2")) - -2.0) < 0.02);
  CHECK(std::abs(column_mean(ds.column("x3"))) < 0.05);

  std::vector<double> freq(4, 0.0);
  const Column& x5 = ds.column("x5");
  for (std::size_t i = 0; i < x5.size(); ++i) freq[static_cast<std::size_t>(x5.level_index(i))] += 1.0;
  for (double& f : freq) f /= static_cast<double>(x5.size());
  CHECK(std::abs(freq[0] - 0.33) < 0.01);
  CHECK(std::abs(freq[1] - 0.07) < 0.01);
  CHECK(std::abs(freq[2] - 0.53) < 0.01);
  CHECK(std::abs(freq[3] - 0.07) < 0.01);
}

TEST_CASE("multinomial category probabilities sum to one") {
  // fixed covariate row, probabilities computed from the stated linear predictors
  const double x1 = 1.3, x2 = -0.7, x3 = 2.0, x4 = -4.0;
  const double s = 0.5 * x1 + 0.2 * x2 + 0.1 * x3 + 0.2 * x4;
  const double l[4] = {0.0, -2.0 + s, s, -2.0 + s};
  double total = 0.0, denom = 0.0;
  for (double lj : l) denom += std::exp(lj);
  for (double lj : l) total += std::exp(lj) / denom;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("rows are exchangeable: half-sample statistics agree") {
  RngStream rng(99, 0);
  const Dataset ds = gen_covariates(100000, rng);
  const Column& x4 = ds.column("x4");
  const std::size_t half = x4.size() / 2;
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < half; ++i) a += x4.values[i];
  for (std::size_t i = half; i < x4.size(); ++i) b += x4.values[i];
  CHECK(std::abs(a / half - b / half) < 0.05);
}

TEST_CASE("binary outcome linear predictor and degenerate cases") {
  const OutcomeCoefficients coef;
  CHECK(outcome_linear_predictor(coef, 0, 0, 0, 0, 0) == 0.0);
  CHECK(outcome_linear_predictor(coef, 0, 0, 0, 0, 1) == doctest::Approx(std::log(5.0)));
  CHECK(outcome_linear_predictor(coef, 1, 1, 1, 1, 0) == doctest::Approx(0.37));

  // intercept -1 with zero lp: P(Y=1) = logit^{-1}(-1)
  const std::size_t n = 200000;
  Dataset ds;
  ds.add_column(make_continuous("x1", std::vector<double>(n, 0.0)));
  ds.add_column(make_continuous("x2", std::vector<double>(n, 0.0)));
  ds.add_column(make_continuous("x3", std::vector<double>(n, 0.0)));
  ds.add_column(make_continuous("x4", std::vector<double>(n, 0.0)));
  ds.add_column(make_categorical("x5", {"1", "2", "3", "4"}, std::vector<double>(n, 0.0)));
  RngStream rng(5, 1);
  const Dataset out = gen_binary_outcome(ds, BinaryOutcomeParams{}, rng);
  const double p = 1.0 / (1.0 + std::exp(1.0));  // 0.26894
  const double mean_y = column_mean(out.column("y"));
  CHECK(std::abs(mean_y - p) < 4.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
}

TEST_CASE("logistic symmetry: l = 0 gives probability one half") {
  // x1 = 20 cancels the -1 intercept (0.05 * 20 = 1)
  const std::size_t n = 200000;
  Dataset ds;
  ds.add_column(make_continuous("x1", std::vector<double>(n, 20.0)));
  ds.add_column(make_continuous("x2", std::vector<double>(n, 0.0)));
  ds.add_column(make_continuous("x3", std::vector<double>(n, 0.0)));
  ds.add_column(make_continuous("x4", std::vector<double>(n, 0.0)));
  ds.add_column(make_categorical("x5", {"1", "2", "3", "4"}, std::vector<double>(n, 0.0)));
  RngStream rng(6, 1);
  const Dataset out = gen_binary_outcome(ds, BinaryOutcomeParams{}, rng);
  CHECK(std::abs(column_mean(out.column("y")) - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("empirical event rate matches the model average") {
  RngStream rng(2024, 3);
  Dataset ds = gen_covariates(100000, rng);
  const Dataset out = gen_binary_outcome(ds, BinaryOutcomeParams{}, rng);
  double p_bar = 0.0;
  const Column &x1 = out.column("x1"), &x2 = out.column("x2"), &x3 = out.column("x3"),
               &x4 = out.column("x4"), &x5 = out.column("x5");
  const BinaryOutcomeParams params;
  for (std::size_t i = 0; i < out.row_count(); ++i) {
    const double l = params.intercept +
                     outcome_linear_predictor(params.coef, x1.values[i], x2.values[i],
                                              x3.values[i], x4.values[i], x5.level_index(i));
    p_bar += 1.0 / (1.0 + std::exp(-l));
  }
  p_bar /= static_cast<double>(out.row_count());
  CHECK(std::abs(column_mean(out.column("y")) - p_bar) < 0.01);
}

TEST_CASE("truncated-Weibull quantile closed forms") {
  const WeibullParams params;
  // one unit of cumulative hazard from age 0 lands on the scale
  CHECK(trunc_weibull_quantile(0.0, 0.0, params, std::exp(-1.0)) ==
        doctest::Approx(84.0).epsilon(1e-12));
  CHECK_THROWS_AS(trunc_weibull_quantile(100.0, 0.0, params, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(trunc_weibull_quantile(0.0, std::nan(""), params, 0.5),
                  std::invalid_argument);
}

TEST_CASE("median of untruncated draws") {
  const WeibullParams params;
  RngStream rng(7, 7);
  const std::size_t n = 100000;
  std::vector<double> draws(n);
  for (double& d : draws) d = sample_trunc_weibull(0.0, 0.0, params, rng);
  std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(n / 2),
                   draws.end());
  const double median = draws[n / 2];
  const double expected = 84.0 * std::pow(std::log(2.0), 1.0 / 7.5);  // 79.99
  CHECK(std::abs(median - expected) < 0.3);
}

TEST_CASE("truncation support") {
  const WeibullParams params;
  RngStream rng(8, 8);
  for (int i = 0; i < 10000; ++i) CHECK(sample_trunc_weibull(50.0, 0.3, params, rng) > 50.0);
}

TEST_CASE("draws match the truncated survival function (KS)") {
  const WeibullParams params;
  const double x_t = 30.0, lp = 0.2;
  const double be = params.scale * std::exp(-lp / params.shape);
  RngStream rng(9, 9);
  const std::size_t n = 100000;
  std::vector<double> draws(n);
  for (double& d : draws) d = sample_trunc_weibull(x_t, lp, params, rng);
  std::sort(draws.begin(), draws.end());
  const double base = std::pow(x_t / be, params.shape);
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::exp(base - std::pow(draws[i] / be, params.shape));
    const double emp_hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double emp_lo = static_cast<double>(i) / static_cast<double>(n);
    ks = std::max({ks, std::abs(cdf - emp_hi), std::abs(cdf - emp_lo)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("tte outcome construction invariants") {
  RngStream rng(11, 0);
  Dataset ds = gen_covariates(20000, rng);
  const Dataset out = gen_tte_outcome(ds, WeibullParams{}, rng);
  const Column& entry = out.column("entry");
  const Column& time = out.column("time");
  const Column& status = out.column("status");
  for (std::size_t i = 0; i < out.row_count(); ++i) {
    CHECK(entry.values[i] < time.values[i]);
    CHECK(time.values[i] <= 100.0);
    CHECK((status.values[i] == 0.0 || status.values[i] == 1.0));
    if (status.values[i] == 0.0) CHECK(time.values[i] == 100.0);
  }
}

TEST_CASE("null-model tail probability matches the analytic average") {
  WeibullParams params;
  params.coef.beta = {0, 0, 0, 0};
  params.coef.category_effects = {0, 0, 0};
  RngStream rng(13, 4);
  Dataset ds = gen_covariates(100000, rng);
  const Dataset out = gen_tte_outcome(ds, params, rng);
  const Column& entry = out.column("entry");
  const Column& time = out.column("time");
  double emp = 0.0, analytic = 0.0;
  const double a = params.shape, b = params.scale;
  for (std::size_t i = 0; i < out.row_count(); ++i) {
    emp += time.values[i] > 90.0;
    analytic += std::exp(std::pow(entry.values[i] / b, a) - std::pow(90.0 / b, a));
  }
  emp /= static_cast<double>(out.row_count());
  analytic /= static_cast<double>(out.row_count());
  CHECK(std::abs(emp - analytic) < 0.01);
}

TEST_CASE("generator rejects missing covariates and bad n") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS(gen_covariates(0, rng), std::invalid_argument);
  Dataset ds = gen_covariates(10, rng);
  ds.column_mut(ds.column_index("x3")).missing[2] = 1;
  CHECK_THROWS_AS(gen_binary_outcome(ds, BinaryOutcomeParams{}, rng), std::invalid_argument);
  CHECK_THROWS_AS(gen_tte_outcome(ds, WeibullParams{}, rng), std::invalid_argument);
}
