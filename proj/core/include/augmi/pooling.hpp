#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "augmi/estimators.hpp"

namespace augmi {

// Rubin's rules: pooled estimate, within/between variances and total
// variance T = U + (1 + 1/m) B.
struct PooledResult {
  std::vector<std::string> labels;
  Eigen::VectorXd estimate;  // Q-bar
  Eigen::VectorXd within;    // U-bar
  Eigen::VectorXd between;   // B
  Eigen::VectorXd total;     // T
  Eigen::VectorXd se;        // sqrt(T)
  int m = 0;

  double coef(std::string_view label) const;
  double pooled_se(std::string_view label) const;
};

PooledResult pool_rubin(const std::vector<FitResult>& fits);

// Fraction of replicates where the MI estimate is strictly closer to truth
// than the CCA estimate; exact ties score 0.
double metric_d(std::span<const double> mi, std::span<const double> cca, double truth);
double metric_d(std::span<const double> mi, std::span<const double> cca,
                std::span<const double> truth);

double metric_mae(std::span<const double> estimates, double truth);
double metric_mae(std::span<const double> estimates, std::span<const double> truth);
double metric_rmse(std::span<const double> estimates, double truth);
double metric_rmse(std::span<const double> estimates, std::span<const double> truth);

struct MethodMetrics {
  double d = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
};

// Per coefficient x method comparison table.  "mi" and "cca" are the two
// methods; d for a method is the fraction of replicates where that method is
// strictly closer to truth than the other.
struct MetricsReport {
  int replicates = 0;  // rows included in the metrics
  std::map<std::string, double> truth;
  std::map<std::string, std::map<std::string, MethodMetrics>> cells;

  std::string to_json_string() const;
  std::string to_csv_string() const;
  void write_json(const std::filesystem::path& path) const;
  void write_csv(const std::filesystem::path& path) const;
};

}  // namespace augmi
