#include "augmi/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace augmi {

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Impurity decrease for the best threshold on one feature, scanning the
// rows sorted by feature value.
template <typename ImpurityAccum>
SplitChoice best_split(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows,
                       int min_leaf, ImpurityAccum&& accum) {
  SplitChoice best;
  const int n_features = static_cast<int>(X.cols());
  std::vector<std::size_t> order(rows);
  for (int f = 0; f < n_features; ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return X(static_cast<Eigen::Index>(a), f) < X(static_cast<Eigen::Index>(b), f);
    });
    accum.reset(order);
    const std::size_t n = order.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      accum.move_left(order[i]);
      const double xv = X(static_cast<Eigen::Index>(order[i]), f);
      const double xn = X(static_cast<Eigen::Index>(order[i + 1]), f);
      if (xv == xn) continue;
      const std::size_t n_left = i + 1, n_right = n - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf) ||
          n_right < static_cast<std::size_t>(min_leaf))
        continue;
      const double gain = accum.gain();
      if (gain > best.gain + 1e-12) {
        best.gain = gain;
        best.feature = f;
        best.threshold = 0.5 * (xv + xn);
      }
    }
  }
  return best;
}

// Variance reduction: total SS minus left/right SS.
struct VarianceAccum {
  const std::vector<double>& y;
  double total_sum = 0.0, total_sq = 0.0;
  double left_sum = 0.0, left_sq = 0.0;
  std::size_t n = 0, n_left = 0;

  explicit VarianceAccum(const std::vector<double>& y_) : y(y_) {}

  void reset(const std::vector<std::size_t>& rows) {
    total_sum = total_sq = left_sum = left_sq = 0.0;
    n = rows.size();
    n_left = 0;
    for (std::size_t r : rows) {
      total_sum += y[r];
      total_sq += y[r] * y[r];
    }
  }
  void move_left(std::size_t r) {
    left_sum += y[r];
    left_sq += y[r] * y[r];
    ++n_left;
  }
  double gain() const {
    const double right_sum = total_sum - left_sum;
    const double right_sq = total_sq - left_sq;
    const std::size_t n_right = n - n_left;
    const double ss_total = total_sq - total_sum * total_sum / static_cast<double>(n);
    const double ss_left = left_sq - left_sum * left_sum / static_cast<double>(n_left);
    const double ss_right =
        right_sq - right_sum * right_sum / static_cast<double>(n_right);
    return ss_total - ss_left - ss_right;
  }
};

// Gini decrease, weighted by child sizes.
struct GiniAccum {
  const std::vector<double>& y;
  int n_classes;
  std::vector<double> total, left;
  std::size_t n = 0, n_left = 0;

  GiniAccum(const std::vector<double>& y_, int k)
      : y(y_), n_classes(k), total(static_cast<std::size_t>(k), 0.0),
        left(static_cast<std::size_t>(k), 0.0) {}

  void reset(const std::vector<std::size_t>& rows) {
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(left.begin(), left.end(), 0.0);
    n = rows.size();
    n_left = 0;
    for (std::size_t r : rows) total[static_cast<std::size_t>(y[r])] += 1.0;
  }
  void move_left(std::size_t r) {
    left[static_cast<std::size_t>(y[r])] += 1.0;
    ++n_left;
  }
  static double gini(const std::vector<double>& counts, double n) {
    double s = 0.0;
    for (double c : counts) s += c * c;
    return 1.0 - s / (n * n);
  }
  double gain() const {
    const double nl = static_cast<double>(n_left);
    const double nr = static_cast<double>(n - n_left);
    const double nn = static_cast<double>(n);
    std::vector<double> right(total.size());
    for (std::size_t k = 0; k < total.size(); ++k) right[k] = total[k] - left[k];
    return gini(total, nn) - (nl / nn) * gini(left, nl) - (nr / nn) * gini(right, nr);
  }
};

}  // namespace

CartTree CartTree::fit(const Eigen::MatrixXd& X, const std::vector<double>& y,
                       bool categorical_target, int n_classes,
                       const CartControls& controls) {
  if (static_cast<std::size_t>(X.rows()) != y.size())
    throw std::invalid_argument("CartTree: length mismatch");
  if (y.empty()) throw std::invalid_argument("CartTree: empty training data");

  CartTree tree;
  struct Pending {
    std::vector<std::size_t> rows;
    int depth;
    int node;
  };
  std::vector<std::size_t> all(y.size());
  std::iota(all.begin(), all.end(), 0);
  tree.nodes_.push_back({});
  std::vector<Pending> stack{{std::move(all), 0, 0}};

  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();

    SplitChoice split;
    if (item.depth < controls.max_depth &&
        item.rows.size() >= 2 * static_cast<std::size_t>(controls.min_leaf)) {
      if (categorical_target) {
        split = best_split(X, item.rows, controls.min_leaf, GiniAccum(y, n_classes));
      } else {
        split = best_split(X, item.rows, controls.min_leaf, VarianceAccum(y));
      }
    }
    if (split.feature < 0) {
      Node& node = tree.nodes_[static_cast<std::size_t>(item.node)];
      node.leaf_index = static_cast<int>(tree.leaves_.size());
      tree.leaves_.push_back({std::move(item.rows)});
      continue;
    }
    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : item.rows) {
      if (X(static_cast<Eigen::Index>(r), split.feature) <= split.threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    const int left_id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    const int right_id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    Node& node = tree.nodes_[static_cast<std::size_t>(item.node)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({std::move(right_rows), item.depth + 1, right_id});
    stack.push_back({std::move(left_rows), item.depth + 1, left_id});
  }
  return tree;
}

std::size_t CartTree::leaf_of(const Eigen::RowVectorXd& row) const {
  std::size_t node = 0;
  while (nodes_[node].feature >= 0) {
    const Node& nd = nodes_[node];
    node = static_cast<std::size_t>(row[nd.feature] <= nd.threshold ? nd.left : nd.right);
  }
  return static_cast<std::size_t>(nodes_[node].leaf_index);
}

std::vector<double> impute_cart(const Eigen::MatrixXd& x_obs, const std::vector<double>& y_obs,
                                bool categorical_target, int n_classes,
                                const Eigen::MatrixXd& x_mis, RngStream& rng,
                                const CartControls& controls) {
  const CartTree tree =
      CartTree::fit(x_obs, y_obs, categorical_target, n_classes, controls);
  std::vector<double> out(static_cast<std::size_t>(x_mis.rows()));
  for (Eigen::Index i = 0; i < x_mis.rows(); ++i) {
    const std::size_t leaf = tree.leaf_of(x_mis.row(i));
    const auto& members = tree.leaf_members(leaf);
    out[static_cast<std::size_t>(i)] = y_obs[members[rng.uniform_index(members.size())]];
  }
  return out;
}

}  // namespace augmi
