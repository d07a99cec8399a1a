#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "augmi/estimators.hpp"

namespace augmi {

namespace {

// Number of inversions counted by a stable bottom-up merge sort.
std::uint64_t count_inversions(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += mid - i;
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                v.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return swaps;
}

std::uint64_t tie_pairs(std::uint64_t run) { return run * (run - 1) / 2; }

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw std::invalid_argument("kendall_tau: length mismatch");
  if (n < 2) throw EstimationError("kendall_tau: fewer than 2 complete pairs");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // tie counts: n1 over x runs, n2 over y runs, n3 over joint runs
  std::uint64_t n1 = 0, n3 = 0;
  std::uint64_t run_x = 1, run_xy = 1;
  std::vector<double> y_sorted(n);
  y_sorted[0] = y[order[0]];
  for (std::size_t i = 1; i < n; ++i) {
    y_sorted[i] = y[order[i]];
    const bool same_x = x[order[i]] == x[order[i - 1]];
    const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
    if (same_x) {
      ++run_x;
    } else {
      n1 += tie_pairs(run_x);
      run_x = 1;
    }
    if (same_xy) {
      ++run_xy;
    } else {
      n3 += tie_pairs(run_xy);
      run_xy = 1;
    }
  }
  n1 += tie_pairs(run_x);
  n3 += tie_pairs(run_xy);

  const std::uint64_t swaps = count_inversions(y_sorted);  // discordant pairs

  std::vector<double> ys(y.begin(), y.end());
  std::sort(ys.begin(), ys.end());
  std::uint64_t n2 = 0, run_y = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (ys[i] == ys[i - 1]) {
      ++run_y;
    } else {
      n2 += tie_pairs(run_y);
      run_y = 1;
    }
  }
  n2 += tie_pairs(run_y);

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (n0 == n1 || n0 == n2)
    throw EstimationError("kendall_tau: zero variance in a margin");

  const double num = static_cast<double>(n0) - static_cast<double>(n1) -
                     static_cast<double>(n2) + static_cast<double>(n3) -
                     2.0 * static_cast<double>(swaps);
  const double denom = std::sqrt(static_cast<double>(n0 - n1)) *
                       std::sqrt(static_cast<double>(n0 - n2));
  return num / denom;
}

double kendall_tau(const Column& x, const Column& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: length mismatch");
  std::vector<double> xs, ys;
  xs.reserve(x.size());
  ys.reserve(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.is_missing(i) || y.is_missing(i)) continue;
    xs.push_back(x.values[i]);
    ys.push_back(y.values[i]);
  }
  if (xs.size() < 2) throw EstimationError("kendall_tau: fewer than 2 complete pairs");
  return kendall_tau(std::span<const double>(xs), std::span<const double>(ys));
}

}  // namespace augmi
