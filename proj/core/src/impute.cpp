#include "augmi/impute.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "augmi/csv.hpp"
#include "augmi/estimators.hpp"

namespace augmi {

std::string_view to_string(ImputeMethod m) {
  switch (m) {
    case ImputeMethod::norm_draw: return "norm-draw";
    case ImputeMethod::logistic_draw: return "logistic-draw";
    case ImputeMethod::multinomial_draw: return "multinomial-draw";
    case ImputeMethod::cart_donor: return "cart-donor";
  }
  return "?";
}

std::string_view to_string(TtePredictor p) {
  switch (p) {
    case TtePredictor::nelson_aalen: return "nelson-aalen";
    case TtePredictor::time: return "time";
    case TtePredictor::log_time: return "log-time";
    case TtePredictor::none: return "none";
  }
  return "?";
}

std::string TraceStats::to_csv_string() const {
  std::ostringstream os;
  std::vector<std::string> fields{"chain", "iteration", "column", "mean", "sd"};
  csv::write_row(os, fields);
  for (const TraceRow& r : rows) {
    fields = {std::to_string(r.chain), std::to_string(r.iteration), r.column,
              csv::format_double(r.mean), csv::format_double(r.sd)};
    csv::write_row(os, fields);
  }
  return os.str();
}

void TraceStats::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << to_csv_string();
}

std::vector<Column> build_tte_predictors(const Column& entry, const Column& exit,
                                         const Column& status, TtePredictor choice) {
  const std::size_t n = exit.size();
  if (entry.size() != n || status.size() != n)
    throw std::invalid_argument("build_tte_predictors: length mismatch");
  for (const Column* c : {&entry, &exit, &status})
    if (c->missing_count() > 0)
      throw std::invalid_argument("build_tte_predictors: survival column " + c->name +
                                  " has missing cells");
  std::vector<Column> out;
  switch (choice) {
    case TtePredictor::none:
      break;
    case TtePredictor::nelson_aalen: {
      std::vector<double> h =
          nelson_aalen(entry.values, exit.values, status.values);
      out.push_back(make_continuous("cumhaz", std::move(h)));
      break;
    }
    case TtePredictor::time: {
      std::vector<double> t(n);
      for (std::size_t i = 0; i < n; ++i) t[i] = exit.values[i] - entry.values[i];
      out.push_back(make_continuous("fu_time", std::move(t)));
      break;
    }
    case TtePredictor::log_time: {
      std::vector<double> t(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double fu = exit.values[i] - entry.values[i];
        if (!(fu > 0.0))
          throw std::invalid_argument(
              "build_tte_predictors: non-positive follow-up for log-time");
        t[i] = std::log(fu);
      }
      out.push_back(make_continuous("log_fu_time", std::move(t)));
      break;
    }
  }
  return out;
}

namespace {

// Candidates passing the |tau| screen against the reference column; degenerate
// taus drop the candidate.
std::vector<std::string> filter_candidates(const Dataset& ds,
                                           const std::vector<std::string>& candidates,
                                           const std::string& reference,
                                           double threshold) {
  if (threshold <= 0.0) return candidates;
  std::vector<std::string> kept;
  const Column& ref = ds.column(reference);
  for (const auto& name : candidates) {
    double tau;
    try {
      tau = kendall_tau(ds.column(name), ref);
    } catch (const EstimationError&) {
      continue;  // degenerate margin: candidate carries no usable signal
    }
    if (std::abs(tau) >= threshold) kept.push_back(name);
  }
  return kept;
}

}  // namespace

std::vector<std::string> select_predictors(const Dataset& ds, const std::string& target,
                                           const std::vector<std::string>& candidates,
                                           const std::vector<std::string>& outcome_cols,
                                           double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw std::invalid_argument("select_predictors: threshold outside [0,1]");
  for (const auto& c : candidates)
    if (c == target)
      throw std::invalid_argument("select_predictors: target among candidates");
  std::vector<std::string> kept =
      outcome_cols.empty()
          ? candidates
          : filter_candidates(ds, candidates, outcome_cols.front(), threshold);
  for (const auto& oc : outcome_cols)
    if (std::find(kept.begin(), kept.end(), oc) == kept.end()) kept.push_back(oc);
  return kept;
}

namespace {

constexpr double kRidgeUnit = 1e-4;  // per observed row

Eigen::VectorXd gaussian_vector(RngStream& rng, Eigen::Index n) {
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  return z;
}

// beta draw from N(beta_hat, A^{-1}) where A is (penalized) information.
Eigen::VectorXd draw_from_information(const Eigen::VectorXd& beta_hat, Eigen::MatrixXd A,
                                      RngStream& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  double jitter = 0.0;
  while (llt.info() != Eigen::Success) {
    jitter = jitter == 0.0 ? 1e-10 * (1.0 + A.diagonal().cwiseAbs().maxCoeff())
                           : jitter * 10.0;
    if (!std::isfinite(jitter))
      throw EstimationError("imputation draw: information matrix not factorizable");
    Eigen::MatrixXd Aj = A;
    Aj.diagonal().array() += jitter;
    llt.compute(Aj);
  }
  const Eigen::VectorXd z = gaussian_vector(rng, beta_hat.size());
  return beta_hat + llt.matrixU().solve(z);
}

}  // namespace

Eigen::VectorXd impute_norm(const DesignMatrix& x_obs, const Eigen::VectorXd& y_obs,
                            const DesignMatrix& x_mis, RngStream& rng) {
  const Eigen::Index n = x_obs.X.rows(), p = x_obs.X.cols();
  if (y_obs.size() != n) throw std::invalid_argument("impute_norm: length mismatch");
  if (n == 0) throw std::invalid_argument("impute_norm: no observed rows");

  double ridge = 0.0;
  if (n < p + 2 || Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(x_obs.X).rank() < p)
    ridge = kRidgeUnit * static_cast<double>(n);

  Eigen::MatrixXd A = x_obs.X.transpose() * x_obs.X;
  A.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) {
    ridge = std::max(ridge, kRidgeUnit * static_cast<double>(n));
    A.diagonal().array() += ridge;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success)
      throw EstimationError("impute_norm: cannot factor X'X");
  }
  const Eigen::VectorXd beta_hat = ldlt.solve(x_obs.X.transpose() * y_obs);
  const double rss = std::max(0.0, (y_obs - x_obs.X * beta_hat).squaredNorm());
  const double df = std::max(static_cast<double>(n - p), 1.0);

  const double sigma2 = rss > 0.0 ? rss / rng.chi_square(df) : 0.0;
  const double sigma = std::sqrt(sigma2);
  const Eigen::VectorXd beta_star =
      beta_hat + sigma * draw_from_information(Eigen::VectorXd::Zero(p), A, rng);

  Eigen::VectorXd out = x_mis.X * beta_star;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += rng.normal(0.0, sigma);
  return out;
}

namespace {

Eigen::VectorXd to_vector(const std::vector<int>& y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = y[i];
  return v;
}

}  // namespace

std::vector<int> impute_logistic(const DesignMatrix& x_obs, const std::vector<int>& y_obs,
                                 const DesignMatrix& x_mis, RngStream& rng) {
  const Eigen::Index n = x_obs.X.rows(), p = x_obs.X.cols();
  if (static_cast<Eigen::Index>(y_obs.size()) != n)
    throw std::invalid_argument("impute_logistic: length mismatch");
  if (n == 0) throw std::invalid_argument("impute_logistic: no observed rows");
  const Eigen::VectorXd y = to_vector(y_obs);

  FitResult fit;
  double ridge = 0.0;
  const double mean = y.mean();
  bool fallback = mean == 0.0 || mean == 1.0 || n <= p;
  if (!fallback) {
    try {
      fit = fit_logistic(x_obs, y);
    } catch (const EstimationError&) {
      fallback = true;
    }
  }
  if (fallback) {
    ridge = kRidgeUnit * static_cast<double>(n);
    GlmControls controls;
    controls.ridge = ridge;
    controls.max_iterations = 300;
    fit = fit_logistic(x_obs, y, controls);
  }

  Eigen::VectorXd w(n);
  const Eigen::VectorXd eta = x_obs.X * fit.coefficients;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = 1.0 / (1.0 + std::exp(-eta[i]));
    w[i] = pi * (1.0 - pi);
  }
  Eigen::MatrixXd info = x_obs.X.transpose() * w.asDiagonal() * x_obs.X;
  info.diagonal().array() += ridge;
  const Eigen::VectorXd beta_star = draw_from_information(fit.coefficients, info, rng);

  std::vector<int> out(static_cast<std::size_t>(x_mis.X.rows()));
  const Eigen::VectorXd eta_mis = x_mis.X * beta_star;
  for (Eigen::Index i = 0; i < eta_mis.size(); ++i) {
    const double pi = 1.0 / (1.0 + std::exp(-eta_mis[i]));
    out[static_cast<std::size_t>(i)] = rng.bernoulli(pi) ? 1 : 0;
  }
  return out;
}

std::vector<int> impute_multinomial(const DesignMatrix& x_obs, const std::vector<int>& y_obs,
                                    int n_levels, const DesignMatrix& x_mis,
                                    RngStream& rng) {
  const Eigen::Index n = x_obs.X.rows(), p = x_obs.X.cols();
  if (static_cast<Eigen::Index>(y_obs.size()) != n)
    throw std::invalid_argument("impute_multinomial: length mismatch");
  if (n == 0) throw std::invalid_argument("impute_multinomial: no observed rows");
  if (n_levels < 2) throw std::invalid_argument("impute_multinomial: need >= 2 levels");
  std::vector<std::string> level_names;
  for (int j = 0; j < n_levels; ++j) level_names.push_back(std::to_string(j));

  FitResult fit;
  double ridge = 0.0;
  std::vector<int> counts(static_cast<std::size_t>(n_levels), 0);
  for (int v : y_obs) ++counts[static_cast<std::size_t>(v)];
  bool fallback = n <= p;
  for (int c : counts) fallback = fallback || c == 0;
  if (!fallback) {
    try {
      fit = fit_multinomial(x_obs, y_obs, n_levels, level_names);
    } catch (const EstimationError&) {
      fallback = true;
    }
  }
  if (fallback) {
    ridge = kRidgeUnit * static_cast<double>(n);
    GlmControls controls;
    controls.ridge = ridge;
    controls.max_iterations = 300;
    fit = fit_multinomial(x_obs, y_obs, n_levels, level_names, controls);
  }

  // information at the fitted point
  const Eigen::Index dim = static_cast<Eigen::Index>(n_levels - 1) * p;
  Eigen::MatrixXd probs(n, n_levels);
  probs.col(0).setZero();
  for (int j = 1; j < n_levels; ++j)
    probs.col(j) = x_obs.X * fit.coefficients.segment(static_cast<Eigen::Index>(j - 1) * p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = probs.row(i).maxCoeff();
    double denom = 0.0;
    for (int j = 0; j < n_levels; ++j) {
      probs(i, j) = std::exp(probs(i, j) - mx);
      denom += probs(i, j);
    }
    probs.row(i) /= denom;
  }
  Eigen::MatrixXd info(dim, dim);
  for (int j = 1; j < n_levels; ++j) {
    for (int k = j; k < n_levels; ++k) {
      Eigen::VectorXd w = j == k
                              ? probs.col(j).cwiseProduct(
                                    (1.0 - probs.col(k).array()).matrix())
                              : (-probs.col(j).cwiseProduct(probs.col(k))).eval();
      const Eigen::MatrixXd block = x_obs.X.transpose() * w.asDiagonal() * x_obs.X;
      info.block(static_cast<Eigen::Index>(j - 1) * p,
                 static_cast<Eigen::Index>(k - 1) * p, p, p) = block;
      if (k != j)
        info.block(static_cast<Eigen::Index>(k - 1) * p,
                   static_cast<Eigen::Index>(j - 1) * p, p, p) = block.transpose();
    }
  }
  info.diagonal().array() += ridge;
  const Eigen::VectorXd theta_star = draw_from_information(fit.coefficients, info, rng);

  std::vector<int> out(static_cast<std::size_t>(x_mis.X.rows()));
  std::vector<double> weights(static_cast<std::size_t>(n_levels));
  for (Eigen::Index i = 0; i < x_mis.X.rows(); ++i) {
    double mx = 0.0;
    weights[0] = 0.0;
    for (int j = 1; j < n_levels; ++j) {
      weights[static_cast<std::size_t>(j)] =
          x_mis.X.row(i) *
          theta_star.segment(static_cast<Eigen::Index>(j - 1) * p, p);
      mx = std::max(mx, weights[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < n_levels; ++j)
      weights[static_cast<std::size_t>(j)] =
          std::exp(weights[static_cast<std::size_t>(j)] - mx);
    out[static_cast<std::size_t>(i)] = static_cast<int>(rng.categorical(weights));
  }
  return out;
}

namespace {

struct TargetPlan {
  std::size_t col;                       // index in the working dataset
  const ImputationModelSpec* spec;
  std::vector<std::string> model_cols;   // selected candidates + outcome block
  std::vector<std::size_t> rows_obs, rows_mis;
};

bool method_compatible(const Column& target, ImputeMethod method) {
  switch (method) {
    case ImputeMethod::norm_draw:
      return target.kind == ColumnKind::continuous ||
             target.kind == ColumnKind::event_time ||
             target.kind == ColumnKind::entry_time;
    case ImputeMethod::logistic_draw:
      return target.kind == ColumnKind::event_indicator ||
             (target.kind == ColumnKind::categorical && target.levels.size() == 2);
    case ImputeMethod::multinomial_draw:
      return target.kind == ColumnKind::categorical && target.levels.size() >= 2;
    case ImputeMethod::cart_donor:
      return true;
  }
  return false;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

}  // namespace

FcsResult fcs_impute(const Dataset& ds, const ImputationConfig& config,
                     const RngStream& rng) {
  if (config.m < 3) throw std::invalid_argument("fcs_impute: m must be >= 3");
  if (config.iterations < 1)
    throw std::invalid_argument("fcs_impute: iterations must be >= 1");

  std::vector<std::size_t> incomplete;
  for (std::size_t j = 0; j < ds.column_count(); ++j)
    if (ds.column(j).missing_count() > 0) incomplete.push_back(j);
  if (incomplete.empty()) throw std::invalid_argument("fcs_impute: nothing to impute");

  // visit order: increasing missingness, ties by column order
  std::stable_sort(incomplete.begin(), incomplete.end(), [&](std::size_t a, std::size_t b) {
    return ds.column(a).missing_count() < ds.column(b).missing_count();
  });

  // base working dataset: input plus derived survival predictors
  Dataset base = ds;
  std::unordered_set<std::string> derived_names;
  std::string tau_reference;
  std::vector<std::string> always_kept;  // outcome block shared by all models
  if (config.binary_outcome) {
    const Column& y = ds.column(*config.binary_outcome);
    if (y.missing_count() > 0)
      throw std::invalid_argument("fcs_impute: outcome column has missing cells");
    tau_reference = y.name;
    always_kept.push_back(y.name);
  }
  if (config.survival) {
    const auto& sv = *config.survival;
    const Column& entry = ds.column(sv.entry);
    const Column& exit = ds.column(sv.exit);
    const Column& status = ds.column(sv.status);
    std::vector<TtePredictor> choices;
    for (const auto& spec : config.specs)
      if (spec.tte_predictor != TtePredictor::none) choices.push_back(spec.tte_predictor);
    // tau reference: delayed-entry cumulative hazard proxy
    choices.push_back(TtePredictor::nelson_aalen);
    for (TtePredictor choice : choices) {
      for (Column& c : build_tte_predictors(entry, exit, status, choice)) {
        if (!base.has_column(c.name)) {
          derived_names.insert(c.name);
          base.add_column(std::move(c));
        }
      }
    }
    tau_reference = "cumhaz";
    always_kept.push_back(sv.status);
    always_kept.push_back(sv.entry);
  }

  // plans per incomplete column
  std::vector<TargetPlan> plans;
  std::unordered_set<std::string> planned;
  for (const auto& spec : config.specs) {
    if (!ds.has_column(spec.target))
      throw std::invalid_argument("fcs_impute: spec targets unknown column " + spec.target);
    if (ds.column(spec.target).missing_count() == 0)
      throw std::invalid_argument("fcs_impute: spec targets complete column " + spec.target);
    if (!planned.insert(spec.target).second)
      throw std::invalid_argument("fcs_impute: duplicate spec for " + spec.target);
  }
  for (std::size_t col : incomplete) {
    const Column& target = ds.column(col);
    const ImputationModelSpec* spec = nullptr;
    for (const auto& s : config.specs)
      if (s.target == target.name) spec = &s;
    if (!spec)
      throw std::invalid_argument("fcs_impute: no spec for incomplete column " +
                                  target.name);
    if (!method_compatible(target, spec->method))
      throw std::invalid_argument("fcs_impute: method " +
                                  std::string(to_string(spec->method)) +
                                  " incompatible with column " + target.name);
    for (const auto& p : spec->predictors) {
      if (p == spec->target)
        throw std::invalid_argument("fcs_impute: target among predictors for " +
                                    spec->target);
      if (!base.has_column(p))
        throw std::invalid_argument("fcs_impute: unknown predictor " + p);
    }
    if (target.missing_count() == target.size())
      throw std::invalid_argument("fcs_impute: column " + target.name +
                                  " has no observed values");

    TargetPlan plan;
    plan.col = col;
    plan.spec = spec;

    std::vector<std::string> kept = spec->predictors;
    if (config.selection.use_kendall && !tau_reference.empty())
      kept = filter_candidates(base, kept, tau_reference, config.selection.threshold);
    // outcome block: always in the model, never filtered
    std::vector<std::string> outcome_block = always_kept;
    if (config.survival && spec->tte_predictor != TtePredictor::none) {
      switch (spec->tte_predictor) {
        case TtePredictor::nelson_aalen: outcome_block.push_back("cumhaz"); break;
        case TtePredictor::time: outcome_block.push_back("fu_time"); break;
        case TtePredictor::log_time: outcome_block.push_back("log_fu_time"); break;
        case TtePredictor::none: break;
      }
    }
    for (const auto& oc : outcome_block)
      if (std::find(kept.begin(), kept.end(), oc) == kept.end()) kept.push_back(oc);
    plan.model_cols = std::move(kept);

    const Column& tcol = ds.column(col);
    for (std::size_t r = 0; r < tcol.size(); ++r)
      (tcol.is_missing(r) ? plan.rows_mis : plan.rows_obs).push_back(r);
    plans.push_back(std::move(plan));
  }

  FcsResult result;
  result.imputations.reserve(static_cast<std::size_t>(config.m));

  for (int chain = 0; chain < config.m; ++chain) {
    RngStream chain_rng = rng.fork(static_cast<std::uint64_t>(chain));
    Dataset working = base;

    // marginal initialization of missing cells
    for (const TargetPlan& plan : plans) {
      Column& c = working.column_mut(plan.col);
      for (std::size_t r : plan.rows_mis)
        c.values[r] = c.values[plan.rows_obs[chain_rng.uniform_index(plan.rows_obs.size())]];
    }
    for (std::size_t j = 0; j < working.column_count(); ++j) {
      auto& missing = working.column_mut(j).missing;
      std::fill(missing.begin(), missing.end(), 0);
    }

    for (int sweep = 0; sweep < config.iterations; ++sweep) {
      for (const TargetPlan& plan : plans) {
        const Column& target = working.column(plan.col);
        const bool cart = plan.spec->method == ImputeMethod::cart_donor;
        DesignMatrix dm = DesignMatrix::build(working, plan.model_cols, !cart);
        DesignMatrix x_obs{take_rows(dm.X, plan.rows_obs), dm.labels};
        DesignMatrix x_mis{take_rows(dm.X, plan.rows_mis), dm.labels};

        ImputeMethod method = plan.spec->method;
        if (method == ImputeMethod::cart_donor && plan.rows_obs.size() < 10) {
          // too few donors: use the GLM family for the target kind
          if (target.kind == ColumnKind::categorical && target.levels.size() > 2)
            method = ImputeMethod::multinomial_draw;
          else if (target.kind == ColumnKind::event_indicator ||
                   target.kind == ColumnKind::categorical)
            method = ImputeMethod::logistic_draw;
          else
            method = ImputeMethod::norm_draw;
          DesignMatrix dm2 = DesignMatrix::build(working, plan.model_cols, true);
          x_obs = DesignMatrix{take_rows(dm2.X, plan.rows_obs), dm2.labels};
          x_mis = DesignMatrix{take_rows(dm2.X, plan.rows_mis), dm2.labels};
        }

        Column& out = working.column_mut(plan.col);
        switch (method) {
          case ImputeMethod::norm_draw: {
            Eigen::VectorXd y(static_cast<Eigen::Index>(plan.rows_obs.size()));
            for (std::size_t i = 0; i < plan.rows_obs.size(); ++i)
              y[static_cast<Eigen::Index>(i)] = out.values[plan.rows_obs[i]];
            const Eigen::VectorXd imputed = impute_norm(x_obs, y, x_mis, chain_rng);
            for (std::size_t i = 0; i < plan.rows_mis.size(); ++i)
              out.values[plan.rows_mis[i]] = imputed[static_cast<Eigen::Index>(i)];
            break;
          }
          case ImputeMethod::logistic_draw: {
            std::vector<int> y(plan.rows_obs.size());
            for (std::size_t i = 0; i < plan.rows_obs.size(); ++i)
              y[i] = static_cast<int>(out.values[plan.rows_obs[i]]);
            const std::vector<int> imputed = impute_logistic(x_obs, y, x_mis, chain_rng);
            for (std::size_t i = 0; i < plan.rows_mis.size(); ++i)
              out.values[plan.rows_mis[i]] = imputed[i];
            break;
          }
          case ImputeMethod::multinomial_draw: {
            std::vector<int> y(plan.rows_obs.size());
            for (std::size_t i = 0; i < plan.rows_obs.size(); ++i)
              y[i] = static_cast<int>(out.values[plan.rows_obs[i]]);
            const std::vector<int> imputed = impute_multinomial(
                x_obs, y, static_cast<int>(out.levels.size()), x_mis, chain_rng);
            for (std::size_t i = 0; i < plan.rows_mis.size(); ++i)
              out.values[plan.rows_mis[i]] = imputed[i];
            break;
          }
          case ImputeMethod::cart_donor: {
            std::vector<double> y(plan.rows_obs.size());
            for (std::size_t i = 0; i < plan.rows_obs.size(); ++i)
              y[i] = out.values[plan.rows_obs[i]];
            const bool cat_target = out.kind == ColumnKind::categorical ||
                                    out.kind == ColumnKind::event_indicator;
            const int n_classes =
                out.kind == ColumnKind::categorical ? static_cast<int>(out.levels.size()) : 2;
            const std::vector<double> imputed =
                impute_cart(x_obs.X, y, cat_target, n_classes, x_mis.X, chain_rng,
                            config.cart);
            for (std::size_t i = 0; i < plan.rows_mis.size(); ++i)
              out.values[plan.rows_mis[i]] = imputed[i];
            break;
          }
        }

        // trace over the imputed slots
        double mean = 0.0;
        for (std::size_t r : plan.rows_mis) mean += out.values[r];
        mean /= static_cast<double>(plan.rows_mis.size());
        double ss = 0.0;
        for (std::size_t r : plan.rows_mis) {
          const double d = out.values[r] - mean;
          ss += d * d;
        }
        const double sd = plan.rows_mis.size() > 1
                              ? std::sqrt(ss / static_cast<double>(plan.rows_mis.size() - 1))
                              : 0.0;
        result.trace.rows.push_back(
            {chain + 1, sweep + 1, out.name, mean, sd});
      }
    }

    // completed dataset: original columns only, mask cleared
    std::vector<Column> cols;
    cols.reserve(ds.column_count());
    for (std::size_t j = 0; j < ds.column_count(); ++j)
      cols.push_back(working.column(j));
    result.imputations.emplace_back(std::move(cols));
  }
  return result;
}

}  // namespace augmi
