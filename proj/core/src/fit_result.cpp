#include "augmi/estimators.hpp"

namespace augmi {

namespace {

std::size_t label_index(const std::vector<std::string>& labels, std::string_view label) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("unknown coefficient label: " + std::string(label));
}

}  // namespace

double FitResult::coef(std::string_view label) const {
  return coefficients[static_cast<Eigen::Index>(label_index(labels, label))];
}

double FitResult::se(std::string_view label) const {
  return standard_errors[static_cast<Eigen::Index>(label_index(labels, label))];
}

}  // namespace augmi
