#include "augmi/simgen.hpp"

#include <cmath>
#include <stdexcept>

namespace augmi {

Dataset gen_covariates(std::size_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("gen_covariates: n must be >= 1");
  std::vector<double> x1(n), x2(n), x3(n), x4(n), x5(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = rng.normal(2.0, 1.0);
    x2[i] = rng.normal(-2.0, 1.0);
    x3[i] = rng.normal(0.5 * x1[i] + 0.5 * x2[i], 2.0);
    x4[i] = rng.normal(0.3 * x1[i] + 0.3 * x2[i] + 0.3 * x3[i], 2.0);
    const double s = 0.5 * x1[i] + 0.2 * x2[i] + 0.1 * x3[i] + 0.2 * x4[i];
    const double l[4] = {0.0, -2.0 + s, s, -2.0 + s};
    double w[4];
    for (int j = 0; j < 4; ++j) w[j] = std::exp(l[j]);
    x5[i] = static_cast<double>(rng.categorical(w));
  }
  Dataset ds;
  ds.add_column(make_continuous("x1", std::move(x1)));
  ds.add_column(make_continuous("x2", std::move(x2)));
  ds.add_column(make_continuous("x3", std::move(x3)));
  ds.add_column(make_continuous("x4", std::move(x4)));
  ds.add_column(make_categorical("x5", {"1", "2", "3", "4"}, std::move(x5)));
  return ds;
}

double outcome_linear_predictor(const OutcomeCoefficients& coef, double x1, double x2,
                                double x3, double x4, int x5_level) {
  double lp = coef.beta[0] * x1 + coef.beta[1] * x2 + coef.beta[2] * x3 +
              coef.beta[3] * x4;
  if (x5_level > 0) lp += coef.category_effects[x5_level - 1];
  return lp;
}

namespace {

struct CovariateView {
  const Column& x1;
  const Column& x2;
  const Column& x3;
  const Column& x4;
  const Column& x5;

  explicit CovariateView(const Dataset& ds)
      : x1(ds.column("x1")),
        x2(ds.column("x2")),
        x3(ds.column("x3")),
        x4(ds.column("x4")),
        x5(ds.column("x5")) {
    for (const Column* c : {&x1, &x2, &x3, &x4, &x5})
      if (c->missing_count() > 0)
        throw std::invalid_argument("covariate column " + c->name +
                                    " has missing cells");
  }

  double lp(const OutcomeCoefficients& coef, std::size_t i) const {
    return outcome_linear_predictor(coef, x1.values[i], x2.values[i], x3.values[i],
                                    x4.values[i], x5.level_index(i));
  }
};

}  // namespace

Dataset gen_binary_outcome(const Dataset& ds, const BinaryOutcomeParams& params,
                           RngStream& rng) {
  const CovariateView cov(ds);
  const std::size_t n = ds.row_count();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double l = params.intercept + cov.lp(params.coef, i);
    const double p = 1.0 / (1.0 + std::exp(-l));
    y[i] = rng.uniform01() <= p ? 1.0 : 0.0;
  }
  Dataset out = ds;
  out.add_column(make_continuous("y", std::move(y), ColumnKind::event_indicator));
  return out;
}

double trunc_weibull_quantile(double entry_age, double lp, const WeibullParams& params,
                              double u) {
  if (!(entry_age >= 0.0) || entry_age >= params.censor_age)
    throw std::invalid_argument("entry age outside [0, censor_age)");
  if (!std::isfinite(lp)) throw std::invalid_argument("non-finite linear predictor");
  if (!(u > 0.0) || !(u < 1.0)) throw std::invalid_argument("u outside (0,1)");
  const double a = params.shape;
  const double be = params.scale * std::exp(-lp / a);
  const double base = std::pow(entry_age / be, a);
  return be * std::pow(base - std::log(u), 1.0 / a);
}

double sample_trunc_weibull(double entry_age, double lp, const WeibullParams& params,
                            RngStream& rng) {
  return trunc_weibull_quantile(entry_age, lp, params, rng.uniform01());
}

Dataset gen_tte_outcome(const Dataset& ds, const WeibullParams& params, RngStream& rng) {
  const CovariateView cov(ds);
  const std::size_t n = ds.row_count();
  std::vector<double> entry(n), exit_time(n), status(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = cov.lp(params.coef, i);
    const double x_t = rng.uniform(params.entry_low, params.entry_high);
    const double t_star = sample_trunc_weibull(x_t, lp, params, rng);
    entry[i] = x_t;
    exit_time[i] = std::min(t_star, params.censor_age);
    status[i] = t_star <= params.censor_age ? 1.0 : 0.0;
  }
  Dataset out = ds;
  out.add_column(make_continuous("entry", std::move(entry), ColumnKind::entry_time));
  out.add_column(make_continuous("time", std::move(exit_time), ColumnKind::event_time));
  out.add_column(make_continuous("status", std::move(status), ColumnKind::event_indicator));
  return out;
}

}  // namespace augmi
