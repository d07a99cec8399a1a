#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "augmi/cart.hpp"
#include "augmi/design.hpp"
#include "augmi/rng.hpp"
#include "augmi/table.hpp"

namespace augmi {

enum class ImputeMethod { norm_draw, logistic_draw, multinomial_draw, cart_donor };
enum class TtePredictor { nelson_aalen, time, log_time, none };

std::string_view to_string(ImputeMethod m);
std::string_view to_string(TtePredictor p);

// Conditional model for one incomplete column.  `predictors` are candidates;
// outcome columns are appended automatically and survive predictor selection.
struct ImputationModelSpec {
  std::string target;
  ImputeMethod method = ImputeMethod::norm_draw;
  std::vector<std::string> predictors;
  TtePredictor tte_predictor = TtePredictor::none;
};

struct PredictorSelection {
  bool use_kendall = true;
  double threshold = 0.05;

  static PredictorSelection all() { return {false, 0.0}; }
  static PredictorSelection kendall(double threshold) { return {true, threshold}; }
};

struct SurvivalOutcomeCols {
  std::string entry = "entry";
  std::string exit = "time";
  std::string status = "status";
};

struct ImputationConfig {
  std::vector<ImputationModelSpec> specs;  // one per incomplete column
  int m = 25;                              // completed datasets, >= 3
  int iterations = 15;                     // FCS sweeps per chain
  PredictorSelection selection{};
  std::optional<std::string> binary_outcome;    // fully observed outcome column
  std::optional<SurvivalOutcomeCols> survival;  // fully observed survival triple
  CartControls cart{};
};

struct TraceRow {
  int chain;       // 1-based
  int iteration;   // 1-based sweep
  std::string column;
  double mean;     // over currently imputed (missing-slot) values
  double sd;
};

struct TraceStats {
  std::vector<TraceRow> rows;

  std::string to_csv_string() const;  // long format: chain,iteration,column,mean,sd
  void write_csv(const std::filesystem::path& path) const;
};

struct FcsResult {
  std::vector<Dataset> imputations;
  TraceStats trace;
};

// Derived fully observed survival predictors: nelson_aalen -> per-row
// delayed-entry cumulative hazard ("cumhaz"); time -> exit - entry
// ("fu_time"); log_time -> log(exit - entry) ("log_fu_time"); none -> no
// derived column (the event indicator itself always enters the models).
std::vector<Column> build_tte_predictors(const Column& entry, const Column& exit,
                                         const Column& status, TtePredictor choice);

// Keeps candidates whose |kendall tau| with the outcome reference is at least
// `threshold`; outcome_cols are always retained and outcome_cols.front() is
// the correlation reference.  Candidates with degenerate tau (zero variance)
// are dropped.  threshold 0 keeps every candidate.
std::vector<std::string> select_predictors(const Dataset& ds, const std::string& target,
                                           const std::vector<std::string>& candidates,
                                           const std::vector<std::string>& outcome_cols,
                                           double threshold);

// Proper single-model imputation draws.  Parameter uncertainty is always
// propagated: norm draws (sigma^2, beta) from the normal-inverse-chi-square
// posterior, the GLM draws take beta from the asymptotic Gaussian at the MLE.
// Separation and rank deficiency fall back to a ridge fit scaled with the
// observed row count; they never throw mid-chain.
Eigen::VectorXd impute_norm(const DesignMatrix& x_obs, const Eigen::VectorXd& y_obs,
                            const DesignMatrix& x_mis, RngStream& rng);
std::vector<int> impute_logistic(const DesignMatrix& x_obs, const std::vector<int>& y_obs,
                                 const DesignMatrix& x_mis, RngStream& rng);
std::vector<int> impute_multinomial(const DesignMatrix& x_obs, const std::vector<int>& y_obs,
                                    int n_levels, const DesignMatrix& x_mis,
                                    RngStream& rng);

// Chained-equations multiple imputation: m independent chains, missing cells
// initialized from observed marginals, columns revisited in order of
// increasing missingness for `iterations` sweeps.  Observed cells are never
// modified.
FcsResult fcs_impute(const Dataset& ds, const ImputationConfig& config,
                     const RngStream& rng);

}  // namespace augmi
