#include "augmi/pooling.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "augmi/csv.hpp"

namespace augmi {

namespace {

std::size_t pooled_index(const std::vector<std::string>& labels, std::string_view label) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("unknown coefficient label: " + std::string(label));
}

}  // namespace

double PooledResult::coef(std::string_view label) const {
  return estimate[static_cast<Eigen::Index>(pooled_index(labels, label))];
}

double PooledResult::pooled_se(std::string_view label) const {
  return se[static_cast<Eigen::Index>(pooled_index(labels, label))];
}

PooledResult pool_rubin(const std::vector<FitResult>& fits) {
  const int m = static_cast<int>(fits.size());
  if (m < 3) throw std::invalid_argument("pool_rubin: need m >= 3 fits");
  const auto& labels = fits.front().labels;
  const Eigen::Index p = fits.front().coefficients.size();
  for (const FitResult& f : fits)
    if (f.labels != labels)
      throw std::invalid_argument("pool_rubin: coefficient labels differ across fits");

  PooledResult out;
  out.labels = labels;
  out.m = m;
  out.estimate = Eigen::VectorXd::Zero(p);
  out.within = Eigen::VectorXd::Zero(p);
  out.between = Eigen::VectorXd::Zero(p);
  for (const FitResult& f : fits) {
    out.estimate += f.coefficients;
    out.within += f.standard_errors.cwiseProduct(f.standard_errors);
  }
  out.estimate /= m;
  out.within /= m;
  for (const FitResult& f : fits) {
    const Eigen::VectorXd d = f.coefficients - out.estimate;
    out.between += d.cwiseProduct(d);
  }
  out.between /= m - 1;
  out.total = out.within + (1.0 + 1.0 / m) * out.between;
  out.se = out.total.cwiseSqrt();
  return out;
}

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
  if (a == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace

double metric_d(std::span<const double> mi, std::span<const double> cca, double truth) {
  check_lengths(mi.size(), cca.size(), "metric_d");
  std::size_t wins = 0;
  for (std::size_t k = 0; k < mi.size(); ++k)
    wins += std::abs(mi[k] - truth) < std::abs(cca[k] - truth);
  return static_cast<double>(wins) / static_cast<double>(mi.size());
}

double metric_d(std::span<const double> mi, std::span<const double> cca,
                std::span<const double> truth) {
  check_lengths(mi.size(), cca.size(), "metric_d");
  check_lengths(mi.size(), truth.size(), "metric_d");
  std::size_t wins = 0;
  for (std::size_t k = 0; k < mi.size(); ++k)
    wins += std::abs(mi[k] - truth[k]) < std::abs(cca[k] - truth[k]);
  return static_cast<double>(wins) / static_cast<double>(mi.size());
}

double metric_mae(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("metric_mae: empty input");
  double s = 0.0;
  for (double e : estimates) s += std::abs(truth - e);
  return s / static_cast<double>(estimates.size());
}

double metric_mae(std::span<const double> estimates, std::span<const double> truth) {
  check_lengths(estimates.size(), truth.size(), "metric_mae");
  double s = 0.0;
  for (std::size_t k = 0; k < estimates.size(); ++k) s += std::abs(truth[k] - estimates[k]);
  return s / static_cast<double>(estimates.size());
}

double metric_rmse(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("metric_rmse: empty input");
  double s = 0.0;
  for (double e : estimates) s += (truth - e) * (truth - e);
  return std::sqrt(s / static_cast<double>(estimates.size()));
}

double metric_rmse(std::span<const double> estimates, std::span<const double> truth) {
  check_lengths(estimates.size(), truth.size(), "metric_rmse");
  double s = 0.0;
  for (std::size_t k = 0; k < estimates.size(); ++k)
    s += (truth[k] - estimates[k]) * (truth[k] - estimates[k]);
  return std::sqrt(s / static_cast<double>(estimates.size()));
}

std::string MetricsReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["replicates"] = replicates;
  nlohmann::ordered_json jt;
  for (const auto& [label, value] : truth) jt[label] = value;
  j["truth"] = std::move(jt);
  nlohmann::ordered_json jc;
  for (const auto& [label, methods] : cells) {
    nlohmann::ordered_json jm;
    for (const auto& [method, mm] : methods) {
      jm[method] = {{"d", mm.d}, {"mae", mm.mae}, {"rmse", mm.rmse}};
    }
    jc[label] = std::move(jm);
  }
  j["coefficients"] = std::move(jc);
  return j.dump(2) + "\n";
}

std::string MetricsReport::to_csv_string() const {
  std::ostringstream os;
  std::vector<std::string> fields{"coefficient", "method", "d", "mae", "rmse"};
  csv::write_row(os, fields);
  for (const auto& [label, methods] : cells) {
    for (const auto& [method, mm] : methods) {
      fields = {label, method, csv::format_double(mm.d), csv::format_double(mm.mae),
                csv::format_double(mm.rmse)};
      csv::write_row(os, fields);
    }
  }
  return os.str();
}

void MetricsReport::write_json(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << to_json_string();
}

void MetricsReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << to_csv_string();
}

}  // namespace augmi
