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

#include "lifesat/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lifesat {

namespace {

enum class Task { kClassification, kRegression };

// Classification: s0/s1 hold the class weights. Regression: s0 holds
// sum(w r), h the sum(w h).
struct Stats {
  double s0 = 0.0;
  double s1 = 0.0;
  double w = 0.0;
  double h = 0.0;

  Stats operator-(const Stats& o) const { return {s0 - o.s0, s1 - o.s1, w - o.w, h - o.h}; }
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

struct OpenLeaf {
  int node;
  int depth;
  std::vector<std::size_t> rows;
  Split split;
};

class Builder {
 public:
  Builder(const Matrix& X, Task task, std::span<const int> y, std::span<const double> r, std::span<const double> w,
          std::span<const double> h, const GrowParams& params, Rng* rng)
      : X_(X), task_(task), y_(y), r_(r), w_(w), h_(h), params_(params), rng_(rng) {
    if (params.features.empty()) {
      allowed_.resize(X.cols());
      std::iota(allowed_.begin(), allowed_.end(), 0);
    } else {
      allowed_ = params.features;
      for (std::size_t f : allowed_) {
        if (f >= X.cols()) throw InvalidArgument("tree: feature index out of range");
      }
    }
    if (params.max_features > 0 && params.max_features < allowed_.size() && rng == nullptr) {
      throw InvalidArgument("tree: feature subsampling needs a random source");
    }
    tree_.n_features = X.cols();
  }

  Tree build(std::span<const std::size_t> rows) {
    if (rows.empty()) throw InvalidArgument("tree: no training rows");
    std::vector<std::size_t> root(rows.begin(), rows.end());
    const int root_id = make_node(root);
    if (params_.max_leaves > 0) {
      grow_best_first(root_id, std::move(root));
    } else {
      grow_depth_first(root_id, std::move(root));
    }
    return std::move(tree_);
  }

 private:
  void add(Stats& s, std::size_t i) const {
    const double wi = w_[i];
    s.w += wi;
    if (task_ == Task::kClassification) {
      (y_[i] == 1 ? s.s1 : s.s0) += wi;
    } else {
      s.s0 += wi * r_[i];
      s.h += wi * h_[i];
    }
  }

  Stats stats_of(const std::vector<std::size_t>& rows) const {
    Stats s;
    for (std::size_t i : rows) add(s, i);
    return s;
  }

  double proxy(const Stats& s) const {
    if (s.w <= 0.0) return 0.0;
    if (task_ == Task::kClassification) return (s.s0 * s.s0 + s.s1 * s.s1) / s.w;
    return s.s0 * s.s0 / s.w;
  }

  double leaf_value(const Stats& s) const {
    if (task_ == Task::kClassification) return s.w > 0.0 ? s.s1 / s.w : 0.5;
    return s.s0 / std::max(s.h, 1e-12);
  }

  int make_node(const std::vector<std::size_t>& rows) {
    const Stats s = stats_of(rows);
    TreeNode node;
    node.value = leaf_value(s);
    node.weight = s.w;
    node.samples = rows.size();
    tree_.nodes.push_back(node);
    return static_cast<int>(tree_.nodes.size() - 1);
  }

  bool splittable(const std::vector<std::size_t>& rows, int depth) const {
    if (params_.max_depth >= 0 && depth >= params_.max_depth) return false;
    const std::size_t n = rows.size();
    if (n < std::max<std::size_t>(params_.min_samples_split, 2) || n < 2 * params_.min_samples_leaf) return false;
    if (task_ == Task::kClassification) {
      const Stats s = stats_of(rows);
      if (s.s0 <= 0.0 || s.s1 <= 0.0) return false;
    }
    return true;
  }

  // Best threshold on one feature; sets `constant` when the feature has a
  // single value inside the node.
  Split scan_feature(const std::vector<std::size_t>& rows, std::size_t f, const Stats& total, bool& constant) const {
    std::vector<std::pair<double, std::size_t>> vals;
    vals.reserve(rows.size());
    for (std::size_t i : rows) vals.emplace_back(X_(i, f), i);
    std::sort(vals.begin(), vals.end());
    Split best;
    constant = vals.front().first == vals.back().first;
    if (constant) return best;
    const double parent = proxy(total);
    const std::size_t n = vals.size();
    Stats left;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      add(left, vals[k].second);
      if (vals[k].first == vals[k + 1].first) continue;
      const std::size_t nl = k + 1;
      if (nl < params_.min_samples_leaf || n - nl < params_.min_samples_leaf) continue;
      const Stats right = total - left;
      if (left.w <= 0.0 || right.w <= 0.0) continue;
      const double gain = proxy(left) + proxy(right) - parent;
      if (gain > best.gain) {
        best.gain = gain;
        best.feature = static_cast<int>(f);
        const double lo = vals[k].first;
        const double hi = vals[k + 1].first;
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best.threshold = mid;
      }
    }
    return best;
  }

  Split best_split(const std::vector<std::size_t>& rows) const {
    const Stats total = stats_of(rows);
    std::vector<std::size_t> candidates = allowed_;
    std::size_t budget = candidates.size();
    if (params_.max_features > 0 && params_.max_features < candidates.size()) {
      rng_->shuffle(candidates);
      budget = params_.max_features;
    }
    std::vector<Split> found;
    std::size_t visited = 0;
    for (std::size_t f : candidates) {
      if (visited >= budget) break;
      bool constant = false;
      Split s = scan_feature(rows, f, total, constant);
      if (constant) continue;
      ++visited;
      if (s.feature >= 0) found.push_back(s);
    }
    Split best;
    for (const Split& s : found) {
      const double tol = 1e-12 * std::max(1.0, std::abs(best.gain));
      const bool better = best.feature < 0 || s.gain > best.gain + tol ||
                          (std::abs(s.gain - best.gain) <= tol && s.feature < best.feature);
      if (better) best = s;
    }
    if (best.feature >= 0 && task_ == Task::kRegression &&
        !(best.gain > 1e-14 * std::max(1.0, proxy(total)))) {
      return {};
    }
    return best;
  }

  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> partition(const std::vector<std::size_t>& rows,
                                                                          const Split& s) const {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : rows) {
      (X_(i, static_cast<std::size_t>(s.feature)) <= s.threshold ? left : right).push_back(i);
    }
    return {std::move(left), std::move(right)};
  }

  std::pair<int, int> apply_split(int node, const std::vector<std::size_t>& rows, const Split& s,
                                  std::vector<std::size_t>& left_rows, std::vector<std::size_t>& right_rows) {
    std::tie(left_rows, right_rows) = partition(rows, s);
    const int l = make_node(left_rows);
    const int r = make_node(right_rows);
    auto& n = tree_.nodes[static_cast<std::size_t>(node)];
    n.feature = s.feature;
    n.threshold = s.threshold;
    n.gain = s.gain;
    n.left = l;
    n.right = r;
    return {l, r};
  }

  void grow_depth_first(int root, std::vector<std::size_t> rows) {
    std::vector<std::tuple<int, int, std::vector<std::size_t>>> stack;
    stack.emplace_back(root, 0, std::move(rows));
    while (!stack.empty()) {
      auto [node, depth, node_rows] = std::move(stack.back());
      stack.pop_back();
      if (!splittable(node_rows, depth)) continue;
      const Split s = best_split(node_rows);
      if (s.feature < 0) continue;
      std::vector<std::size_t> lr;
      std::vector<std::size_t> rr;
      auto [l, r] = apply_split(node, node_rows, s, lr, rr);
      stack.emplace_back(r, depth + 1, std::move(rr));
      stack.emplace_back(l, depth + 1, std::move(lr));
    }
  }

  void grow_best_first(int root, std::vector<std::size_t> rows) {
    std::vector<OpenLeaf> open;
    auto open_leaf = [&](int node, int depth, std::vector<std::size_t> node_rows) {
      if (!splittable(node_rows, depth)) return;
      Split s = best_split(node_rows);
      if (s.feature < 0) return;
      open.push_back({node, depth, std::move(node_rows), s});
    };
    open_leaf(root, 0, std::move(rows));
    std::size_t leaves = 1;
    while (leaves < params_.max_leaves && !open.empty()) {
      std::size_t pick = 0;
      for (std::size_t i = 1; i < open.size(); ++i) {
        if (open[i].split.gain > open[pick].split.gain ||
            (open[i].split.gain == open[pick].split.gain && open[i].node < open[pick].node)) {
          pick = i;
        }
      }
      OpenLeaf leaf = std::move(open[pick]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
      std::vector<std::size_t> lr;
      std::vector<std::size_t> rr;
      auto [l, r] = apply_split(leaf.node, leaf.rows, leaf.split, lr, rr);
      ++leaves;
      open_leaf(l, leaf.depth + 1, std::move(lr));
      open_leaf(r, leaf.depth + 1, std::move(rr));
    }
  }

  const Matrix& X_;
  Task task_;
  std::span<const int> y_;
  std::span<const double> r_;
  std::span<const double> w_;
  std::span<const double> h_;
  const GrowParams& params_;
  Rng* rng_;
  std::vector<std::size_t> allowed_;
  Tree tree_;
};

}  // namespace

double gini(double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0.0) return 0.0;
  const double p0 = w0 / w;
  const double p1 = w1 / w;
  return 1.0 - p0 * p0 - p1 * p1;
}

const TreeNode& Tree::leaf(std::span<const double> x) const {
  if (x.size() != n_features) {
    throw DimensionMismatch("tree expects " + std::to_string(n_features) + " features, got " +
                            std::to_string(x.size()));
  }
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i];
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t out = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
    d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    out = std::max(out, d[i] + 1);
  }
  return out;
}

nlohmann::json Tree::to_json() const {
  std::vector<int> feature, left, right;
  std::vector<double> threshold, value, weight, gain;
  std::vector<std::size_t> samples;
  for (const auto& n : nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    weight.push_back(n.weight);
    gain.push_back(n.gain);
    samples.push_back(n.samples);
  }
  return {{"n_features", n_features}, {"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},           {"value", value},     {"weight", weight},       {"gain", gain},
          {"samples", samples}};
}

Tree Tree::from_json(const nlohmann::json& doc) {
  Tree t;
  t.n_features = doc.at("n_features").get<std::size_t>();
  const auto feature = doc.at("feature").get<std::vector<int>>();
  const auto threshold = doc.at("threshold").get<std::vector<double>>();
  const auto left = doc.at("left").get<std::vector<int>>();
  const auto right = doc.at("right").get<std::vector<int>>();
  const auto value = doc.at("value").get<std::vector<double>>();
  const auto weight = doc.at("weight").get<std::vector<double>>();
  const auto gain = doc.at("gain").get<std::vector<double>>();
  const auto samples = doc.at("samples").get<std::vector<std::size_t>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || value.size() != n ||
      weight.size() != n || gain.size() != n || samples.size() != n) {
    throw ParseError("tree: inconsistent node arrays");
  }
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode node{feature[i], threshold[i], left[i], right[i], value[i], weight[i], gain[i], samples[i]};
    const bool leaf = node.left < 0;
    if (!leaf && (node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
                  node.left >= static_cast<int>(n) || node.right >= static_cast<int>(n) || node.feature < 0 ||
                  static_cast<std::size_t>(node.feature) >= t.n_features)) {
      throw ParseError("tree: malformed node " + std::to_string(i));
    }
    t.nodes.push_back(node);
  }
  return t;
}

Tree grow_classification_tree(const Matrix& X, std::span<const int> y, std::span<const double> w,
                              std::span<const std::size_t> rows, const GrowParams& params, Rng* rng) {
  if (y.size() != X.rows() || w.size() != X.rows()) throw DimensionMismatch("tree: label or weight length differs");
  return Builder(X, Task::kClassification, y, {}, w, {}, params, rng).build(rows);
}

Tree grow_regression_tree(const Matrix& X, std::span<const double> r, std::span<const double> w,
                          std::span<const double> h, std::span<const std::size_t> rows, const GrowParams& params,
                          Rng* rng) {
  if (r.size() != X.rows() || w.size() != X.rows() || h.size() != X.rows()) {
    throw DimensionMismatch("tree: residual, weight or hessian length differs");
  }
  return Builder(X, Task::kRegression, {}, r, w, h, params, rng).build(rows);
}

}  // namespace lifesat
