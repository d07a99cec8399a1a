#pragma once

#include <Eigen/Dense>
#include <vector>

#include "augmi/rng.hpp"

namespace augmi {

struct CartControls {
  int min_leaf = 5;
  int max_depth = 10;
};

// Binary CART on a numeric feature matrix: variance-reduction splits for
// continuous targets, Gini for categorical.  No pruning; donors are drawn
// uniformly from the training rows routed to the same leaf.
class CartTree {
 public:
  static CartTree fit(const Eigen::MatrixXd& X, const std::vector<double>& y,
                      bool categorical_target, int n_classes,
                      const CartControls& controls = {});

  // Index of the leaf a feature row lands in.
  std::size_t leaf_of(const Eigen::RowVectorXd& row) const;
  const std::vector<std::size_t>& leaf_members(std::size_t leaf) const {
    return leaves_[leaf].members;
  }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    int feature = -1;  // -1 = leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int leaf_index = -1;
  };
  struct Leaf {
    std::vector<std::size_t> members;  // training-row indices
  };
  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
};

// Donor-based imputation: fits a tree on the observed rows and, for each
// missing row, returns the target value of a uniformly drawn donor from its
// leaf.
std::vector<double> impute_cart(const Eigen::MatrixXd& x_obs, const std::vector<double>& y_obs,
                                bool categorical_target, int n_classes,
                                const Eigen::MatrixXd& x_mis, RngStream& rng,
                                const CartControls& controls = {});

}  // namespace augmi
