#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "augmi/table.hpp"

namespace augmi {

// Numeric model matrix: optional intercept, continuous columns as-is,
// categorical columns dummy-coded against their first declared level
// (labels "<name>.<level>").  Cells used must be observed.
struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<std::string> labels;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }

  static DesignMatrix build(const Dataset& ds, const std::vector<std::string>& columns,
                            bool intercept);
  static DesignMatrix build(const Dataset& ds, const std::vector<std::string>& columns,
                            bool intercept, const std::vector<std::size_t>& rows);
};

}  // namespace augmi
