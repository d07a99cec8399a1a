#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "augmi/impute.hpp"
#include "augmi/pooling.hpp"
#include "augmi/table.hpp"

namespace augmi {

enum class OutcomeKind { binary, tte };
enum class MiMethod { glm, cart, transformation, nelson_aalen };
enum class TruthMode { generating, full_data };

std::string_view to_string(OutcomeKind k);
std::string_view to_string(MiMethod m);

// Declarative description of one simulation experiment.
struct ScenarioConfig {
  OutcomeKind outcome = OutcomeKind::binary;
  std::size_t n = 0;
  double observed_fraction = 0.0;
  int replicates = 0;  // K
  std::uint64_t seed = 0;

  int m = 25;
  int iterations = 15;
  MiMethod method = MiMethod::glm;
  PredictorSelection selection = PredictorSelection::kendall(0.05);
  CartControls cart{};

  int parallelism = 0;  // 0 = hardware concurrency
  std::string output_dir = "augmi-out";
  TruthMode truth_mode = TruthMode::generating;
  MaskMode mask_mode = MaskMode::row_joint;
};

// Strict JSON parsing: unknown keys are an error, invariant violations name
// the offending field.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_string(std::string_view json_text);
std::string config_to_json_string(const ScenarioConfig& config);
void validate_config(const ScenarioConfig& config);

// n = 20,000, K = 50, m = 10, iterations = 10.
void apply_desk_preset(ScenarioConfig& config);

struct ReplicateRecord {
  int replicate = 0;
  bool ok = false;
  std::string error;  // error class when !ok
  bool cca_converged = false;
  bool mi_converged = false;
  int imputations_used = 0;
  std::vector<std::string> labels;
  std::vector<double> truth;
  std::vector<double> cca_estimate, cca_se;
  std::vector<double> mi_estimate, mi_se;
  double elapsed_ms = 0.0;  // volatile; kept out of records.csv
};

struct ScenarioResult {
  std::vector<ReplicateRecord> records;
  MetricsReport metrics;
  TraceStats trace_rep1;
  int successes = 0;
  int failures = 0;
};

// Runs K replicates of generate -> mask -> {CCA, FCS-impute -> fit -> pool},
// writing records.csv incrementally plus metrics.json, metrics.csv,
// trace_rep1.csv, timings.csv and config_resolved.json under output_dir.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Offline recomputation of the metrics report from a records.csv file.  When
// no truth map is given the truth_<label> columns of the records are used.
MetricsReport metrics_from_records(const std::filesystem::path& records_csv,
                                   const std::optional<std::map<std::string, double>>& truth);

// Generating-parameter truth vector for the analysis-model labels.
std::map<std::string, double> generating_truth(OutcomeKind outcome);

}  // namespace augmi
