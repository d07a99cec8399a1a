#include "augmi/scenario.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "augmi/csv.hpp"
#include "augmi/design.hpp"
#include "augmi/estimators.hpp"
#include "augmi/simgen.hpp"

namespace augmi {

namespace {

const std::vector<std::string> kAnalysisColumns{"x1", "x2", "x3", "x4", "x5"};
const std::vector<std::string> kMaskedColumns{"x3", "x4", "x5"};

std::vector<std::string> analysis_labels(OutcomeKind outcome) {
  std::vector<std::string> labels;
  if (outcome == OutcomeKind::binary) labels.push_back("intercept");
  else {
    labels.push_back("log_shape");
    labels.push_back("log_scale");
  }
  for (const char* l : {"x1", "x2", "x3", "x4", "x5.2", "x5.3", "x5.4"})
    labels.emplace_back(l);
  return labels;
}

FitResult analysis_fit(const Dataset& ds, OutcomeKind outcome) {
  if (outcome == OutcomeKind::binary) {
    const DesignMatrix dm = DesignMatrix::build(ds, kAnalysisColumns, true);
    const Column& y = ds.column("y");
    Eigen::VectorXd yv(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i)
      yv[static_cast<Eigen::Index>(i)] = y.values[i];
    return fit_logistic(dm, yv);
  }
  const DesignMatrix dm = DesignMatrix::build(ds, kAnalysisColumns, false);
  const auto vec = [&](const char* name) {
    const Column& c = ds.column(name);
    Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = c.values[i];
    return v;
  };
  return fit_weibull_lt(dm, vec("entry"), vec("time"), vec("status"));
}

ImputationConfig build_impute_config(const ScenarioConfig& cfg) {
  ImputationConfig icfg;
  icfg.m = cfg.m;
  icfg.iterations = cfg.iterations;
  icfg.selection = cfg.selection;
  icfg.cart = cfg.cart;

  TtePredictor choice = TtePredictor::none;
  if (cfg.outcome == OutcomeKind::binary) {
    icfg.binary_outcome = "y";
  } else {
    icfg.survival = SurvivalOutcomeCols{"entry", "time", "status"};
    switch (cfg.method) {
      case MiMethod::glm: choice = TtePredictor::time; break;
      case MiMethod::transformation: choice = TtePredictor::log_time; break;
      case MiMethod::nelson_aalen: choice = TtePredictor::nelson_aalen; break;
      case MiMethod::cart: choice = TtePredictor::nelson_aalen; break;
    }
  }
  const bool cart = cfg.method == MiMethod::cart;
  const ImputeMethod continuous = cart ? ImputeMethod::cart_donor : ImputeMethod::norm_draw;
  const ImputeMethod categorical =
      cart ? ImputeMethod::cart_donor : ImputeMethod::multinomial_draw;
  icfg.specs = {
      {"x3", continuous, {"x1", "x2", "x4", "x5"}, choice},
      {"x4", continuous, {"x1", "x2", "x3", "x5"}, choice},
      {"x5", categorical, {"x1", "x2", "x3", "x4"}, choice},
  };
  return icfg;
}

std::string error_class(const std::exception& e) {
  if (dynamic_cast<const SeparationError*>(&e)) return "separation";
  if (dynamic_cast<const RankDeficientError*>(&e)) return "rank-deficient";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "non-convergence";
  if (dynamic_cast<const EstimationError*>(&e)) return "estimation";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid-argument";
  return "error";
}

struct ReplicateOutput {
  ReplicateRecord record;
  TraceStats trace;
};

ReplicateOutput run_replicate(const ScenarioConfig& cfg, int k, bool want_trace) {
  const auto t0 = std::chrono::steady_clock::now();
  ReplicateOutput out;
  ReplicateRecord& rec = out.record;
  rec.replicate = k;
  rec.labels = analysis_labels(cfg.outcome);
  try {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(k));
    Dataset full = gen_covariates(cfg.n, rng);
    if (cfg.outcome == OutcomeKind::binary)
      full = gen_binary_outcome(full, BinaryOutcomeParams{}, rng);
    else
      full = gen_tte_outcome(full, WeibullParams{}, rng);

    if (cfg.truth_mode == TruthMode::generating) {
      const auto truth_map = generating_truth(cfg.outcome);
      for (const auto& l : rec.labels) rec.truth.push_back(truth_map.at(l));
    } else {
      const FitResult full_fit = analysis_fit(full, cfg.outcome);
      rec.truth.assign(full_fit.coefficients.begin(), full_fit.coefficients.end());
    }

    Dataset masked =
        mask_cells(full, kMaskedColumns, cfg.observed_fraction, rng, cfg.mask_mode);

    const FitResult cca = analysis_fit(complete_rows(masked), cfg.outcome);
    rec.cca_estimate.assign(cca.coefficients.begin(), cca.coefficients.end());
    rec.cca_se.assign(cca.standard_errors.begin(), cca.standard_errors.end());
    rec.cca_converged = cca.converged;

    std::size_t n_missing = 0;
    for (const Column& c : masked.columns()) n_missing += c.missing_count();
    if (n_missing == 0) {
      // nothing to impute: the MI branch degenerates to the CCA fit
      rec.mi_estimate = rec.cca_estimate;
      rec.mi_se = rec.cca_se;
      rec.mi_converged = rec.cca_converged;
      rec.imputations_used = 0;
      rec.error = "nothing to impute; CCA fit reused";
    } else {
      const ImputationConfig icfg = build_impute_config(cfg);
      FcsResult fcs = fcs_impute(masked, icfg, rng);
      std::vector<FitResult> fits;
      fits.reserve(fcs.imputations.size());
      bool all_converged = true;
      for (const Dataset& imp : fcs.imputations) {
        fits.push_back(analysis_fit(imp, cfg.outcome));
        all_converged = all_converged && fits.back().converged;
      }
      const PooledResult pooled = pool_rubin(fits);
      rec.mi_estimate.assign(pooled.estimate.begin(), pooled.estimate.end());
      rec.mi_se.assign(pooled.se.begin(), pooled.se.end());
      rec.mi_converged = all_converged;
      rec.imputations_used = pooled.m;
      if (want_trace) out.trace = std::move(fcs.trace);
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = error_class(e) + ": " + e.what();
    rec.cca_estimate.clear();
    rec.cca_se.clear();
    rec.mi_estimate.clear();
    rec.mi_se.clear();
  }
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return out;
}

std::vector<std::string> records_header(const std::vector<std::string>& labels) {
  std::vector<std::string> h{"replicate", "status",       "error",
                             "cca_converged", "mi_converged", "imputations_used"};
  for (const auto& l : labels) {
    h.push_back("truth_" + l);
    h.push_back("cca_" + l);
    h.push_back("cca_se_" + l);
    h.push_back("mi_" + l);
    h.push_back("mi_se_" + l);
  }
  return h;
}

std::string record_to_line(const ReplicateRecord& rec) {
  std::vector<std::string> fields{std::to_string(rec.replicate),
                                  rec.ok ? "ok" : "failed",
                                  rec.error,
                                  rec.cca_converged ? "1" : "0",
                                  rec.mi_converged ? "1" : "0",
                                  std::to_string(rec.imputations_used)};
  for (std::size_t i = 0; i < rec.labels.size(); ++i) {
    if (!rec.ok) {
      for (int j = 0; j < 5; ++j) fields.emplace_back();
      continue;
    }
    fields.push_back(csv::format_double(rec.truth[i]));
    fields.push_back(csv::format_double(rec.cca_estimate[i]));
    fields.push_back(csv::format_double(rec.cca_se[i]));
    fields.push_back(csv::format_double(rec.mi_estimate[i]));
    fields.push_back(csv::format_double(rec.mi_se[i]));
  }
  std::ostringstream os;
  csv::write_row(os, fields);
  return os.str();
}

// Serialized appender that commits lines in replicate order regardless of
// which worker finishes first; the file tail is always a clean prefix.
class OrderedWriter {
 public:
  explicit OrderedWriter(std::ofstream os) : os_(std::move(os)) {}

  void write_header(const std::string& line) {
    os_ << line;
    os_.flush();
  }

  void commit(int index, std::string line) {
    std::lock_guard<std::mutex> lock(mu_);
    pending_.emplace(index, std::move(line));
    while (!pending_.empty() && pending_.begin()->first == next_) {
      os_ << pending_.begin()->second;
      pending_.erase(pending_.begin());
      ++next_;
      os_.flush();
    }
  }

 private:
  std::ofstream os_;
  std::mutex mu_;
  std::map<int, std::string> pending_;
  int next_ = 0;
};

}  // namespace

std::map<std::string, double> generating_truth(OutcomeKind outcome) {
  const OutcomeCoefficients coef;
  std::map<std::string, double> truth;
  if (outcome == OutcomeKind::binary) {
    truth["intercept"] = BinaryOutcomeParams{}.intercept;
  } else {
    const WeibullParams wp;
    truth["log_shape"] = std::log(wp.shape);
    truth["log_scale"] = std::log(wp.scale);
  }
  truth["x1"] = coef.beta[0];
  truth["x2"] = coef.beta[1];
  truth["x3"] = coef.beta[2];
  truth["x4"] = coef.beta[3];
  truth["x5.2"] = coef.category_effects[0];
  truth["x5.3"] = coef.category_effects[1];
  truth["x5.4"] = coef.category_effects[2];
  return truth;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);

  {
    std::ofstream os(out_dir / "config_resolved.json", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write config_resolved.json");
    os << config_to_json_string(cfg);
  }

  const int K = cfg.replicates;
  int workers = cfg.parallelism > 0 ? cfg.parallelism
                                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, K);

  const auto labels = analysis_labels(cfg.outcome);
  std::ofstream records_os(out_dir / "records.csv", std::ios::binary);
  if (!records_os) throw std::runtime_error("cannot write records.csv");
  OrderedWriter writer(std::move(records_os));
  {
    std::ostringstream os;
    const auto header = records_header(labels);
    csv::write_row(os, header);
    writer.write_header(os.str());
  }

  ScenarioResult result;
  result.records.resize(static_cast<std::size_t>(K));
  std::atomic<int> next{0};
  std::mutex trace_mu;

  auto worker_fn = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= K) return;
      ReplicateOutput out = run_replicate(cfg, k, k == 0);
      writer.commit(k, record_to_line(out.record));
      if (k == 0) {
        std::lock_guard<std::mutex> lock(trace_mu);
        result.trace_rep1 = std::move(out.trace);
      }
      result.records[static_cast<std::size_t>(k)] = std::move(out.record);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
  for (auto& t : pool) t.join();

  for (const ReplicateRecord& rec : result.records)
    (rec.ok ? result.successes : result.failures) += 1;

  {
    std::ofstream os(out_dir / "timings.csv", std::ios::binary);
    std::vector<std::string> fields{"replicate", "elapsed_ms"};
    csv::write_row(os, fields);
    for (const ReplicateRecord& rec : result.records) {
      fields = {std::to_string(rec.replicate), csv::format_double(rec.elapsed_ms)};
      csv::write_row(os, fields);
    }
  }

  result.metrics = metrics_from_records(out_dir / "records.csv", std::nullopt);
  result.metrics.write_json(out_dir / "metrics.json");
  result.metrics.write_csv(out_dir / "metrics.csv");
  result.trace_rep1.write_csv(out_dir / "trace_rep1.csv");
  return result;
}

MetricsReport metrics_from_records(const std::filesystem::path& records_csv,
                                   const std::optional<std::map<std::string, double>>& truth) {
  const auto rows = csv::read_rows(records_csv);
  if (rows.empty()) throw std::runtime_error("records: empty file");
  const auto& header = rows.front();

  std::vector<std::string> labels;
  for (const auto& h : header)
    if (h.starts_with("truth_")) labels.push_back(h.substr(6));
  auto col_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("records: missing column " + name);
  };
  const std::size_t status_col = col_of("status");

  struct LabelCols {
    std::size_t truth, cca, mi;
  };
  std::vector<LabelCols> label_cols;
  label_cols.reserve(labels.size());
  for (const auto& l : labels)
    label_cols.push_back({col_of("truth_" + l), col_of("cca_" + l), col_of("mi_" + l)});

  const auto parse_cell = [](const std::string& cell) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
      throw std::runtime_error("records: bad numeric cell '" + cell + "'");
    return v;
  };

  MetricsReport report;
  std::map<std::string, std::vector<double>> truth_v, cca_v, mi_v;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw std::runtime_error("records: ragged row " + std::to_string(r));
    if (row[status_col] != "ok") continue;
    ++report.replicates;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& l = labels[i];
      truth_v[l].push_back(truth ? truth->at(l) : parse_cell(row[label_cols[i].truth]));
      cca_v[l].push_back(parse_cell(row[label_cols[i].cca]));
      mi_v[l].push_back(parse_cell(row[label_cols[i].mi]));
    }
  }
  if (report.replicates == 0) return report;

  for (const auto& l : labels) {
    const auto& t = truth_v[l];
    const auto& c = cca_v[l];
    const auto& m = mi_v[l];
    double mean_truth = 0.0;
    for (double v : t) mean_truth += v;
    report.truth[l] = mean_truth / static_cast<double>(t.size());
    MethodMetrics mi_m{metric_d(m, c, std::span<const double>(t)),
                       metric_mae(m, std::span<const double>(t)),
                       metric_rmse(m, std::span<const double>(t))};
    MethodMetrics cca_m{metric_d(c, m, std::span<const double>(t)),
                        metric_mae(c, std::span<const double>(t)),
                        metric_rmse(c, std::span<const double>(t))};
    report.cells[l]["mi"] = mi_m;
    report.cells[l]["cca"] = cca_m;
  }
  return report;
}

}  // namespace augmi
