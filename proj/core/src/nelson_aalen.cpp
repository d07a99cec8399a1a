#include <algorithm>
#include <stdexcept>
#include <vector>

#include "augmi/estimators.hpp"

namespace augmi {

std::vector<double> nelson_aalen(std::span<const double> entry,
                                 std::span<const double> exit,
                                 std::span<const double> status) {
  const std::size_t n = exit.size();
  if (entry.size() != n || status.size() != n)
    throw std::invalid_argument("nelson_aalen: length mismatch");
  if (n == 0) throw std::invalid_argument("nelson_aalen: empty input");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(entry[i] < exit[i]))
      throw std::invalid_argument("nelson_aalen: need entry < exit rowwise");
    if (status[i] != 0.0 && status[i] != 1.0)
      throw std::invalid_argument("nelson_aalen: status not in {0,1}");
  }

  // distinct event times with multiplicities
  std::vector<double> event_times;
  event_times.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (status[i] == 1.0) event_times.push_back(exit[i]);
  std::sort(event_times.begin(), event_times.end());

  std::vector<double> sorted_entry(entry.begin(), entry.end());
  std::vector<double> sorted_exit(exit.begin(), exit.end());
  std::sort(sorted_entry.begin(), sorted_entry.end());
  std::sort(sorted_exit.begin(), sorted_exit.end());

  // step function: times[k] distinct event time, cum[k] = H(times[k])
  std::vector<double> times, cum;
  double h = 0.0;
  for (std::size_t i = 0; i < event_times.size();) {
    std::size_t j = i;
    while (j < event_times.size() && event_times[j] == event_times[i]) ++j;
    const double s = event_times[i];
    const auto entered =
        std::lower_bound(sorted_entry.begin(), sorted_entry.end(), s) -
        sorted_entry.begin();  // # entry < s
    const auto exited = std::lower_bound(sorted_exit.begin(), sorted_exit.end(), s) -
                        sorted_exit.begin();  // # exit < s
    const double at_risk = static_cast<double>(entered - exited);
    h += static_cast<double>(j - i) / at_risk;
    times.push_back(s);
    cum.push_back(h);
    i = j;
  }

  auto hazard_at = [&](double t) {
    // H(t) = cumulative hazard of the last event time <= t
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0.0;
    return cum[static_cast<std::size_t>(it - times.begin()) - 1];
  };

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = hazard_at(exit[i]) - hazard_at(entry[i]);
  return out;
}

}  // namespace augmi
