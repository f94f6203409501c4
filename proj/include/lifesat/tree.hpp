/*
 * Copyright 2026 The lifesat Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIFESAT_TREE_HPP_
#define LIFESAT_TREE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "lifesat/common.hpp"

namespace lifesat {

// Binary tree node. Rows with x[feature] <= threshold go left. For
// classification trees `value` is the weighted fraction of class 1 in the
// leaf; for regression trees it is the leaf output.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  double weight = 0.0;
  // Weighted impurity decrease achieved by this node's split.
  double gain = 0.0;
  std::size_t samples = 0;

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

class Tree {
 public:
  std::vector<TreeNode> nodes;
  std::size_t n_features = 0;

  const TreeNode& leaf(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return leaf(x).value; }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  nlohmann::json to_json() const;
  static Tree from_json(const nlohmann::json& doc);

  bool operator==(const Tree&) const = default;
};

struct GrowParams {
  // Negative means unlimited; 0 yields a single leaf.
  int max_depth = -1;
  // Leaf budget for best-first growth; 0 grows depth-first without a budget.
  std::size_t max_leaves = 0;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  // Features examined per split; 0 means every allowed feature.
  std::size_t max_features = 0;
  // Allowed feature indices; empty means all.
  std::vector<std::size_t> features;
};

double gini(double w0, double w1);

// CART with weighted Gini. Candidate splits are compared on impurity
// decrease; ties go to the lowest feature index, then the lowest threshold.
// `rows` lists the training rows (repeats are not allowed; use weights).
// `rng` is required when max_features restricts the candidates.
Tree grow_classification_tree(const Matrix& X, std::span<const int> y, std::span<const double> w,
                              std::span<const std::size_t> rows, const GrowParams& params, Rng* rng = nullptr);

// Regression tree on residuals r with weights w. Splits minimize weighted
// squared error; each leaf outputs sum(w r) / max(sum(w h), 1e-12).
Tree grow_regression_tree(const Matrix& X, std::span<const double> r, std::span<const double> w,
                          std::span<const double> h, std::span<const std::size_t> rows, const GrowParams& params,
                          Rng* rng = nullptr);

}  // namespace lifesat

#endif  // LIFESAT_TREE_HPP_
