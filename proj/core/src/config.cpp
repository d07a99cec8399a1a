#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "augmi/scenario.hpp"

namespace augmi {

std::string_view to_string(OutcomeKind k) {
  return k == OutcomeKind::binary ? "binary" : "tte";
}

std::string_view to_string(MiMethod m) {
  switch (m) {
    case MiMethod::glm: return "glm";
    case MiMethod::cart: return "cart";
    case MiMethod::transformation: return "transformation";
    case MiMethod::nelson_aalen: return "nelson-aalen";
  }
  return "?";
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config: field '" + field + "' " + what);
}

void check_keys(const json& j, const std::string& scope,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key))
      throw std::invalid_argument("config: unknown key '" +
                                  (scope.empty() ? key : scope + "." + key) + "'");
  }
}

MiMethod parse_method(const std::string& s) {
  if (s == "glm") return MiMethod::glm;
  if (s == "cart") return MiMethod::cart;
  if (s == "transformation") return MiMethod::transformation;
  if (s == "nelson-aalen") return MiMethod::nelson_aalen;
  bad_field("mi.method", "must be one of glm|cart|transformation|nelson-aalen");
}

}  // namespace

ScenarioConfig parse_config_string(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  check_keys(j, "", {"outcome", "n", "observed_fraction", "replicates", "seed", "mi",
                     "parallelism", "output_dir", "truth_mode", "mask_mode"});
  for (const char* required : {"outcome", "n", "observed_fraction", "replicates", "seed"})
    if (!j.contains(required)) bad_field(required, "is required");

  ScenarioConfig cfg;
  {
    const std::string outcome = j.at("outcome").get<std::string>();
    if (outcome == "binary") cfg.outcome = OutcomeKind::binary;
    else if (outcome == "tte") cfg.outcome = OutcomeKind::tte;
    else bad_field("outcome", "must be 'binary' or 'tte'");
  }
  if (!j.at("n").is_number_unsigned() || j.at("n").get<std::uint64_t>() == 0)
    bad_field("n", "must be a positive integer");
  cfg.n = j.at("n").get<std::size_t>();
  if (!j.at("observed_fraction").is_number())
    bad_field("observed_fraction", "must be a number");
  cfg.observed_fraction = j.at("observed_fraction").get<double>();
  if (!j.at("replicates").is_number_unsigned() || j.at("replicates").get<int>() <= 0)
    bad_field("replicates", "must be a positive integer");
  cfg.replicates = j.at("replicates").get<int>();
  if (!j.at("seed").is_number_unsigned()) bad_field("seed", "must be a non-negative integer");
  cfg.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("mi")) {
    const json& mi = j.at("mi");
    if (!mi.is_object()) bad_field("mi", "must be an object");
    check_keys(mi, "mi", {"m", "iterations", "method", "predictor_selection", "cart"});
    if (mi.contains("m")) {
      if (!mi.at("m").is_number_unsigned()) bad_field("mi.m", "must be a positive integer");
      cfg.m = mi.at("m").get<int>();
    }
    if (mi.contains("iterations")) {
      if (!mi.at("iterations").is_number_unsigned())
        bad_field("mi.iterations", "must be a positive integer");
      cfg.iterations = mi.at("iterations").get<int>();
    }
    if (mi.contains("method")) cfg.method = parse_method(mi.at("method").get<std::string>());
    if (mi.contains("predictor_selection")) {
      const json& sel = mi.at("predictor_selection");
      if (sel.is_string() && sel.get<std::string>() == "all") {
        cfg.selection = PredictorSelection::all();
      } else if (sel.is_object()) {
        check_keys(sel, "mi.predictor_selection", {"kendall_tau"});
        if (!sel.contains("kendall_tau") || !sel.at("kendall_tau").is_number())
          bad_field("mi.predictor_selection", "must be \"all\" or {\"kendall_tau\": t}");
        cfg.selection = PredictorSelection::kendall(sel.at("kendall_tau").get<double>());
      } else {
        bad_field("mi.predictor_selection", "must be \"all\" or {\"kendall_tau\": t}");
      }
    }
    if (mi.contains("cart")) {
      const json& cart = mi.at("cart");
      if (!cart.is_object()) bad_field("mi.cart", "must be an object");
      check_keys(cart, "mi.cart", {"min_leaf", "max_depth"});
      if (cart.contains("min_leaf")) cfg.cart.min_leaf = cart.at("min_leaf").get<int>();
      if (cart.contains("max_depth")) cfg.cart.max_depth = cart.at("max_depth").get<int>();
    }
  }
  if (j.contains("parallelism")) {
    if (!j.at("parallelism").is_number_unsigned())
      bad_field("parallelism", "must be a non-negative integer");
    cfg.parallelism = j.at("parallelism").get<int>();
  }
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("truth_mode")) {
    const std::string mode = j.at("truth_mode").get<std::string>();
    if (mode == "generating") cfg.truth_mode = TruthMode::generating;
    else if (mode == "full-data") cfg.truth_mode = TruthMode::full_data;
    else bad_field("truth_mode", "must be 'generating' or 'full-data'");
  }
  if (j.contains("mask_mode")) {
    const std::string mode = j.at("mask_mode").get<std::string>();
    if (mode == "row-joint") cfg.mask_mode = MaskMode::row_joint;
    else if (mode == "per-cell") cfg.mask_mode = MaskMode::per_cell;
    else bad_field("mask_mode", "must be 'row-joint' or 'per-cell'");
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_string(buf.str());
}

void validate_config(const ScenarioConfig& cfg) {
  if (cfg.n == 0) bad_field("n", "must be positive");
  if (!(cfg.observed_fraction > 0.0) || cfg.observed_fraction > 1.0)
    bad_field("observed_fraction", "must be in (0, 1]");
  if (cfg.replicates <= 0) bad_field("replicates", "must be positive");
  if (cfg.m < 3) bad_field("mi.m", "must be >= 3");
  if (cfg.iterations <= 0) bad_field("mi.iterations", "must be positive");
  if (cfg.parallelism < 0) bad_field("parallelism", "must be >= 0");
  if (cfg.selection.use_kendall &&
      (cfg.selection.threshold < 0.0 || cfg.selection.threshold > 1.0))
    bad_field("mi.predictor_selection", "kendall_tau must be in [0, 1]");
  if (cfg.cart.min_leaf < 1) bad_field("mi.cart.min_leaf", "must be >= 1");
  if (cfg.cart.max_depth < 1) bad_field("mi.cart.max_depth", "must be >= 1");
  if (cfg.outcome == OutcomeKind::binary &&
      (cfg.method == MiMethod::transformation || cfg.method == MiMethod::nelson_aalen))
    bad_field("mi.method",
              "'" + std::string(to_string(cfg.method)) + "' applies to tte outcomes only");
  if (cfg.output_dir.empty()) bad_field("output_dir", "must not be empty");
}

std::string config_to_json_string(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["outcome"] = std::string(to_string(cfg.outcome));
  j["n"] = cfg.n;
  j["observed_fraction"] = cfg.observed_fraction;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  nlohmann::ordered_json mi;
  mi["m"] = cfg.m;
  mi["iterations"] = cfg.iterations;
  mi["method"] = std::string(to_string(cfg.method));
  if (cfg.selection.use_kendall)
    mi["predictor_selection"] = {{"kendall_tau", cfg.selection.threshold}};
  else
    mi["predictor_selection"] = "all";
  mi["cart"] = {{"min_leaf", cfg.cart.min_leaf}, {"max_depth", cfg.cart.max_depth}};
  j["mi"] = std::move(mi);
  j["parallelism"] = cfg.parallelism;
  j["output_dir"] = cfg.output_dir;
  j["truth_mode"] = cfg.truth_mode == TruthMode::generating ? "generating" : "full-data";
  j["mask_mode"] = cfg.mask_mode == MaskMode::row_joint ? "row-joint" : "per-cell";
  return j.dump(2) + "\n";
}

void apply_desk_preset(ScenarioConfig& cfg) {
  cfg.n = 20000;
  cfg.replicates = 50;
  cfg.m = 10;
  cfg.iterations = 10;
}

}  // namespace augmi
