#pragma once

#include <array>
#include <cstddef>

#include "augmi/rng.hpp"
#include "augmi/table.hpp"

namespace augmi {

// Linear-predictor coefficients shared by both outcome models: four
// continuous slopes plus log odds/hazard ratios for categories 2..4 of x5.
struct OutcomeCoefficients {
  std::array<double, 4> beta{0.05, 0.2, 0.1, 0.02};
  std::array<double, 3> category_effects{1.6094379124341003,    // log 5
                                         0.6931471805599453,    // log 2
                                         0.4054651081081644};   // log 1.5
};

struct BinaryOutcomeParams {
  double intercept = -1.0;
  OutcomeCoefficients coef;
};

struct WeibullParams {
  double shape = 7.5;
  double scale = 84.0;
  OutcomeCoefficients coef;
  double censor_age = 100.0;
  double entry_low = 0.0;
  double entry_high = 50.0;
};

// Five covariates: x1 ~ N(2,1), x2 ~ N(-2,1), x3 | x1,x2 ~ N(.5x1+.5x2, 2^2),
// x4 | x1..x3 ~ N(.3x1+.3x2+.3x3, 2^2), and a four-category x5 from a
// multinomial logit with linear predictors (0, -2+s, s, -2+s) where
// s = .5x1+.2x2+.1x3+.2x4.  Second normal parameters are standard deviations.
Dataset gen_covariates(std::size_t n, RngStream& rng);

// Evaluates the outcome linear predictor for one row of x1..x5
// (x5 as 0-based level index); intercept not included.
double outcome_linear_predictor(const OutcomeCoefficients& coef, double x1, double x2,
                                double x3, double x4, int x5_level);

// Appends binary column "y" with P(y=1|x) = logit^{-1}(intercept + lp).
Dataset gen_binary_outcome(const Dataset& ds, const BinaryOutcomeParams& params,
                           RngStream& rng);

// Quantile of T | T > entry_age where T ~ Weibull(a, b e^{-lp/a}), that is
// survival S(t) = exp(-(t/b)^a e^{lp}).  u in (0,1).
double trunc_weibull_quantile(double entry_age, double lp, const WeibullParams& params,
                              double u);
double sample_trunc_weibull(double entry_age, double lp, const WeibullParams& params,
                            RngStream& rng);

// Appends entry ~ Uniform(entry_low, entry_high), exit time
// min(T*, censor_age) and the event indicator; columns "entry", "time",
// "status".
Dataset gen_tte_outcome(const Dataset& ds, const WeibullParams& params, RngStream& rng);

}  // namespace augmi
