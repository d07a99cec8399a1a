#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "augmi/scenario.hpp"

namespace {

int resolve_workers(int cli_workers, int config_workers) {
  if (cli_workers > 0) return cli_workers;
  if (const char* env = std::getenv("AUGMI_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
    std::cerr << "augmi: ignoring invalid AUGMI_WORKERS='" << env << "'\n";
  }
  return config_workers;
}

std::map<std::string, double> read_truth_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  const nlohmann::json j = nlohmann::json::parse(is);
  const nlohmann::json& obj = j.contains("truth") ? j.at("truth") : j;
  std::map<std::string, double> truth;
  for (const auto& [key, value] : obj.items()) truth[key] = value.get<double>();
  return truth;
}

int run_simulate(const std::string& config_path, bool desk_preset, const std::string& out_dir,
                 int workers) {
  augmi::ScenarioConfig cfg = augmi::parse_config(config_path);
  if (desk_preset) augmi::apply_desk_preset(cfg);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.parallelism = resolve_workers(workers, cfg.parallelism);
  augmi::validate_config(cfg);

  const augmi::ScenarioResult result = augmi::run_scenario(cfg);
  std::cout << "replicates: " << cfg.replicates << "  ok: " << result.successes
            << "  failed: " << result.failures << "\n"
            << "artifacts under " << cfg.output_dir << "\n";
  const double ok_fraction =
      static_cast<double>(result.successes) / static_cast<double>(cfg.replicates);
  return ok_fraction >= 0.95 ? 0 : 1;
}

int run_metrics(const std::string& records_path, const std::string& truth_path,
                const std::string& out_path) {
  std::optional<std::map<std::string, double>> truth;
  if (!truth_path.empty()) truth = read_truth_json(truth_path);
  const augmi::MetricsReport report = augmi::metrics_from_records(records_path, truth);
  if (out_path.empty()) {
    std::cout << report.to_json_string();
  } else {
    report.write_json(out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survey-augmentation simulation: complete-case analysis vs chained-equations "
               "multiple imputation for binary and delayed-entry time-to-event outcomes"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset;
  int workers = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "run a scenario end to end");
  simulate->add_option("--config", config_path, "scenario config (JSON)")->required();
  simulate->add_option("--preset", preset,
                       "named preset; 'desk' sets n=20000, K=50, m=10, iterations=10")
      ->check(CLI::IsMember({"desk"}));
  simulate->add_option("--out", out_dir, "output directory (overrides config)");
  simulate->add_option("--workers", workers, "worker count (overrides AUGMI_WORKERS and config)");

  std::string records_path, truth_path, metrics_out;
  CLI::App* metrics = app.add_subcommand("metrics", "recompute a metrics report from records.csv");
  metrics->add_option("--records", records_path, "records.csv from a scenario run")->required();
  metrics->add_option("--truth", truth_path,
                      "truth JSON (flat map or a metrics.json with a 'truth' object); "
                      "defaults to the truth_* columns in the records");
  metrics->add_option("--out", metrics_out, "write the report to this path instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(config_path, preset == "desk", out_dir, workers);
    if (metrics->parsed()) return run_metrics(records_path, truth_path, metrics_out);
  } catch (const std::exception& e) {
    std::cerr << "augmi: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
