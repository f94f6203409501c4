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

#include "lifesat/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

namespace lifesat {

namespace {

void check_training(const Matrix& X, std::span<const int> y, std::span<const double> w) {
  if (X.rows() == 0 || X.cols() == 0) throw InvalidArgument("training matrix is empty");
  if (y.size() != X.rows()) throw DimensionMismatch("label count differs from row count");
  if (!w.empty() && w.size() != X.rows()) throw DimensionMismatch("weight count differs from row count");
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
  }
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("sample weights must be finite and non-negative");
  }
}

std::vector<double> base_weights(std::span<const int> y, std::span<const double> w,
                                 const std::map<int, double>& class_weight) {
  std::vector<double> out(y.size(), 1.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!w.empty()) out[i] = w[i];
    if (auto it = class_weight.find(y[i]); it != class_weight.end()) out[i] *= it->second;
  }
  return out;
}

std::vector<std::size_t> positive_rows(std::span<const double> w) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) rows.push_back(i);
  }
  if (rows.empty()) throw DegenerateInput("every sample weight is zero");
  return rows;
}

nlohmann::json class_weight_json(const std::map<int, double>& cw) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : cw) out[std::to_string(k)] = v;
  return out;
}

std::map<int, double> class_weight_from_json(const nlohmann::json& doc) {
  std::map<int, double> out;
  if (doc.is_null()) return out;
  if (!doc.is_object()) throw InvalidArgument("class_weight must map class to multiplier");
  for (const auto& [k, v] : doc.items()) {
    int cls = -1;
    try {
      cls = std::stoi(k);
    } catch (const std::exception&) {
      throw InvalidArgument("class_weight key '" + k + "' is not a class");
    }
    if (cls != 0 && cls != 1) throw InvalidArgument("class_weight key '" + k + "' is not 0 or 1");
    const double m = v.get<double>();
    if (!(m >= 0.0)) throw InvalidArgument("class_weight multipliers must be non-negative");
    out[cls] = m;
  }
  return out;
}

nlohmann::json trees_json(const std::vector<Tree>& trees) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : trees) arr.push_back(t.to_json());
  return arr;
}

std::vector<Tree> trees_from_json(const nlohmann::json& doc) {
  std::vector<Tree> out;
  for (const auto& t : doc) out.push_back(Tree::from_json(t));
  return out;
}

int depth_from_json(const nlohmann::json& v) { return v.is_null() ? -1 : v.get<int>(); }

nlohmann::json depth_json(int depth) { return depth < 0 ? nlohmann::json(nullptr) : nlohmann::json(depth); }

// Weighted column mean and population std; zero spread maps to 1.
void standardize(const Matrix& X, std::span<const double> w, std::vector<double>& mean, std::vector<double>& scale,
                 Matrix& Z) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  const double W = std::accumulate(w.begin(), w.end(), 0.0);
  mean.assign(d, 0.0);
  scale.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += w[i] * X(i, j);
  }
  for (auto& m : mean) m /= W;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) scale[j] += w[i] * (X(i, j) - mean[j]) * (X(i, j) - mean[j]);
  }
  for (auto& s : scale) {
    s = std::sqrt(s / W);
    if (!(s > 1e-12)) s = 1.0;
  }
  Z = Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) Z(i, j) = (X(i, j) - mean[j]) / scale[j];
  }
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

// ------------------------------------------------------------ Classifier

ProbaPair make_pair_from_p1(double p1) {
  p1 = std::clamp(p1, 0.0, 1.0);
  return {1.0 - p1, p1};
}

void Classifier::check_width(std::span<const double> x) const {
  if (x.size() != n_features()) {
    throw DimensionMismatch(kind() + " expects " + std::to_string(n_features()) + " features, got " +
                            std::to_string(x.size()));
  }
}

int Classifier::predict_row(std::span<const double> x) const {
  const auto p = predict_proba_row(x);
  return p[1] >= p[0] ? kContent : kDiscontent;
}

std::vector<ProbaPair> Classifier::predict_proba(const Matrix& X) const {
  std::vector<ProbaPair> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_proba_row(X.row(r));
  return out;
}

std::vector<int> Classifier::predict(const Matrix& X) const {
  std::vector<int> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
  return out;
}

// ------------------------------------------------------------ trees

ProbaPair DecisionTreeModel::predict_proba_row(std::span<const double> x) const {
  return make_pair_from_p1(tree_.predict(x));
}

nlohmann::json DecisionTreeModel::to_json() const {
  return {{"kind", kind()},
          {"params",
           {{"max_depth", depth_json(params_.max_depth)},
            {"min_samples_split", params_.min_samples_split},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"class_weight", class_weight_json(params_.class_weight)}}},
          {"tree", tree_.to_json()}};
}

std::shared_ptr<DecisionTreeModel> DecisionTreeModel::from_json(const nlohmann::json& doc) {
  const auto& p = doc.at("params");
  TreeParams params;
  params.max_depth = depth_from_json(p.at("max_depth"));
  params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
  params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  params.class_weight = class_weight_from_json(p.at("class_weight"));
  return std::make_shared<DecisionTreeModel>(Tree::from_json(doc.at("tree")), params);
}

std::shared_ptr<DecisionTreeModel> train_decision_tree(const Matrix& X, std::span<const int> y,
                                                       std::span<const double> w, const TreeParams& params) {
  check_training(X, y, w);
  const auto weights = base_weights(y, w, params.class_weight);
  GrowParams grow;
  grow.max_depth = params.max_depth;
  grow.min_samples_split = params.min_samples_split;
  grow.min_samples_leaf = params.min_samples_leaf;
  const auto rows = positive_rows(weights);
  return std::make_shared<DecisionTreeModel>(grow_classification_tree(X, y, weights, rows, grow), params);
}

std::size_t resolve_max_features(const std::string& rule, std::size_t n_features) {
  if (n_features == 0) throw InvalidArgument("no features");
  const auto d = static_cast<double>(n_features);
  if (rule == "all") return n_features;
  if (rule == "sqrt") return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(d)));
  if (rule == "log2") return std::max<std::size_t>(1, static_cast<std::size_t>(std::log2(d)));
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(rule, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != rule.size() || v < 1) throw InvalidArgument("max_features must be sqrt, log2, all or a positive count");
  return std::min(n_features, static_cast<std::size_t>(v));
}

ProbaPair RandomForestModel::predict_proba_row(std::span<const double> x) const {
  check_width(x);
  double p1 = 0.0;
  for (const auto& t : trees_) p1 += t.predict(x);
  return make_pair_from_p1(p1 / static_cast<double>(trees_.size()));
}

nlohmann::json RandomForestModel::to_json() const {
  return {{"kind", kind()},
          {"params",
           {{"n_estimators", params_.n_estimators},
            {"max_depth", depth_json(params_.max_depth)},
            {"min_samples_split", params_.min_samples_split},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"max_features", params_.max_features},
            {"bootstrap", params_.bootstrap},
            {"class_weight", class_weight_json(params_.class_weight)}}},
          {"seeds", seeds_},
          {"trees", trees_json(trees_)}};
}

std::shared_ptr<RandomForestModel> RandomForestModel::from_json(const nlohmann::json& doc) {
  const auto& p = doc.at("params");
  ForestParams params;
  params.n_estimators = p.at("n_estimators").get<std::size_t>();
  params.max_depth = depth_from_json(p.at("max_depth"));
  params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
  params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  params.max_features = p.at("max_features").get<std::string>();
  params.bootstrap = p.at("bootstrap").get<bool>();
  params.class_weight = class_weight_from_json(p.at("class_weight"));
  auto trees = trees_from_json(doc.at("trees"));
  if (trees.empty()) throw ParseError("random forest has no trees");
  return std::make_shared<RandomForestModel>(std::move(trees), params,
                                             doc.at("seeds").get<std::vector<std::uint64_t>>());
}

std::shared_ptr<RandomForestModel> train_random_forest(const Matrix& X, std::span<const int> y,
                                                       std::span<const double> w, const ForestParams& params,
                                                       std::uint64_t seed) {
  check_training(X, y, w);
  if (params.n_estimators == 0) throw InvalidArgument("n_estimators must be positive");
  const auto weights = base_weights(y, w, params.class_weight);
  GrowParams grow;
  grow.max_depth = params.max_depth;
  grow.min_samples_split = params.min_samples_split;
  grow.min_samples_leaf = params.min_samples_leaf;
  grow.max_features = resolve_max_features(params.max_features, X.cols());
  const std::size_t n = X.rows();

  std::vector<Tree> trees(params.n_estimators);
  std::vector<std::uint64_t> seeds(params.n_estimators);
  for (std::size_t t = 0; t < params.n_estimators; ++t) seeds[t] = derive_seed(seed, t);
  parallel_for(params.n_estimators, [&](std::size_t t) {
    Rng rng(seeds[t]);
    std::vector<double> tw = weights;
    if (params.bootstrap) {
      std::vector<double> counts(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) counts[rng.below(n)] += 1.0;
      for (std::size_t i = 0; i < n; ++i) tw[i] *= counts[i];
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (tw[i] > 0.0) rows.push_back(i);
    }
    if (rows.empty()) rows = positive_rows(weights);
    trees[t] = grow_classification_tree(X, y, tw, rows, grow, &rng);
  });
  return std::make_shared<RandomForestModel>(std::move(trees), params, std::move(seeds));
}

std::vector<double> impurity_importances(const RandomForestModel& forest) {
  const std::size_t d = forest.n_features();
  std::vector<double> total(d, 0.0);
  for (const auto& tree : forest.trees()) {
    std::vector<double> imp(d, 0.0);
    for (const auto& node : tree.nodes) {
      if (!node.is_leaf()) imp[static_cast<std::size_t>(node.feature)] += std::max(0.0, node.gain);
    }
    const double s = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (s <= 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) total[j] += imp[j] / s;
  }
  const double s = std::accumulate(total.begin(), total.end(), 0.0);
  if (s > 0.0) {
    for (auto& v : total) v /= s;
  }
  return total;
}

// ------------------------------------------------------------- boosting

double BoostedEnsembleModel::raw_score(std::span<const double> x, std::size_t stages) const {
  check_width(x);
  double f = init_;
  const std::size_t m = std::min(stages, stages_.size());
  for (std::size_t t = 0; t < m; ++t) f += params_.learning_rate * stages_[t].predict(x);
  return f;
}

ProbaPair BoostedEnsembleModel::predict_proba_row(std::span<const double> x) const {
  return make_pair_from_p1(sigmoid(raw_score(x)));
}

nlohmann::json BoostedEnsembleModel::to_json() const {
  return {{"kind", kind_},
          {"params",
           {{"n_estimators", params_.n_estimators},
            {"learning_rate", params_.learning_rate},
            {"growth", params_.growth == Growth::kDepthwise ? "depthwise" : "leafwise"},
            {"max_depth", depth_json(params_.max_depth)},
            {"num_leaves", params_.num_leaves},
            {"feature_fraction", params_.feature_fraction},
            {"min_samples_leaf", params_.min_samples_leaf}}},
          {"n_features", n_features_},
          {"init", init_},
          {"stages", trees_json(stages_)}};
}

std::shared_ptr<BoostedEnsembleModel> BoostedEnsembleModel::from_json(const nlohmann::json& doc) {
  const auto& p = doc.at("params");
  BoostParams params;
  params.n_estimators = p.at("n_estimators").get<std::size_t>();
  params.learning_rate = p.at("learning_rate").get<double>();
  params.growth = p.at("growth").get<std::string>() == "leafwise" ? Growth::kLeafwise : Growth::kDepthwise;
  params.max_depth = depth_from_json(p.at("max_depth"));
  params.num_leaves = p.at("num_leaves").get<std::size_t>();
  params.feature_fraction = p.at("feature_fraction").get<double>();
  params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  auto model = std::make_shared<BoostedEnsembleModel>(doc.at("kind").get<std::string>(), doc.at("init").get<double>(),
                                                      trees_from_json(doc.at("stages")), params);
  model->set_n_features(doc.at("n_features").get<std::size_t>());
  return model;
}

std::shared_ptr<BoostedEnsembleModel> train_gradient_boosting(const Matrix& X, std::span<const int> y,
                                                              std::span<const double> w, const BoostParams& params,
                                                              std::uint64_t seed, const std::string& kind,
                                                              std::vector<double>* staged_loss) {
  check_training(X, y, w);
  if (!(params.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  if (!(params.feature_fraction > 0.0 && params.feature_fraction <= 1.0)) {
    throw InvalidArgument("feature_fraction must lie in (0, 1]");
  }
  if (params.growth == Growth::kLeafwise && params.num_leaves < 2) throw InvalidArgument("num_leaves must be at least 2");
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  const auto weights = base_weights(y, w, {});
  const auto rows = positive_rows(weights);
  double W = 0.0;
  double pos = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    W += weights[i];
    pos += weights[i] * y[i];
  }
  const double rate = pos / W;

  auto loss_of = [&](const std::vector<double>& F) {
    double l = 0.0;
    for (std::size_t i = 0; i < n; ++i) l += weights[i] * (softplus(F[i]) - y[i] * F[i]);
    return l / W;
  };

  std::vector<Tree> stages;
  if (rate <= 0.0 || rate >= 1.0) {
    spdlog::warn("{}: single-class training labels, fitting a constant model", kind);
    const double p = std::clamp(rate, 1e-6, 1.0 - 1e-6);
    auto model = std::make_shared<BoostedEnsembleModel>(kind, std::log(p / (1.0 - p)), std::move(stages), params);
    model->set_n_features(d);
    return model;
  }
  const double init = std::log(rate / (1.0 - rate));
  std::vector<double> F(n, init);
  if (staged_loss) staged_loss->assign(1, loss_of(F));

  GrowParams grow;
  grow.min_samples_leaf = params.min_samples_leaf;
  grow.max_depth = params.max_depth;
  if (params.growth == Growth::kLeafwise) grow.max_leaves = params.num_leaves;
  const std::size_t n_sub = params.feature_fraction >= 1.0
                                ? d
                                : std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(params.feature_fraction *
                                                                                                 static_cast<double>(d))),
                                                          1, d);

  std::vector<double> r(n);
  std::vector<double> h(n);
  stages.reserve(params.n_estimators);
  for (std::size_t t = 0; t < params.n_estimators; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(F[i]);
      r[i] = y[i] - p;
      h[i] = p * (1.0 - p);
    }
    grow.features.clear();
    if (n_sub < d) {
      Rng rng(derive_seed(seed, t));
      std::vector<std::size_t> all(d);
      std::iota(all.begin(), all.end(), 0);
      rng.shuffle(all);
      grow.features.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_sub));
      std::sort(grow.features.begin(), grow.features.end());
    }
    Tree tree = grow_regression_tree(X, r, weights, h, rows, grow);
    for (std::size_t i = 0; i < n; ++i) F[i] += params.learning_rate * tree.predict(X.row(i));
    stages.push_back(std::move(tree));
    if (staged_loss) staged_loss->push_back(loss_of(F));
  }
  auto model = std::make_shared<BoostedEnsembleModel>(kind, init, std::move(stages), params);
  model->set_n_features(d);
  return model;
}

// ------------------------------------------------------------- adaboost

int AdaBoostModel::vote(std::size_t t, std::span<const double> x) const {
  return learners_[t].predict(x) >= 0.5 ? 1 : -1;
}

double AdaBoostModel::margin(std::span<const double> x) const {
  check_width(x);
  double m = 0.0;
  for (std::size_t t = 0; t < learners_.size(); ++t) m += alphas_[t] * vote(t, x);
  return m;
}

ProbaPair AdaBoostModel::predict_proba_row(std::span<const double> x) const {
  return make_pair_from_p1(sigmoid(margin(x)));
}

int AdaBoostModel::predict_row(std::span<const double> x) const { return margin(x) >= 0.0 ? kContent : kDiscontent; }

nlohmann::json AdaBoostModel::to_json() const {
  return {{"kind", kind()},
          {"params",
           {{"n_estimators", params_.n_estimators},
            {"learning_rate", params_.learning_rate},
            {"base_max_depth", params_.base_max_depth}}},
          {"n_features", n_features_},
          {"alphas", alphas_},
          {"learners", trees_json(learners_)}};
}

std::shared_ptr<AdaBoostModel> AdaBoostModel::from_json(const nlohmann::json& doc) {
  const auto& p = doc.at("params");
  AdaBoostParams params;
  params.n_estimators = p.at("n_estimators").get<std::size_t>();
  params.learning_rate = p.at("learning_rate").get<double>();
  params.base_max_depth = p.at("base_max_depth").get<int>();
  auto learners = trees_from_json(doc.at("learners"));
  auto alphas = doc.at("alphas").get<std::vector<double>>();
  if (alphas.size() != learners.size()) throw ParseError("adaboost: alpha count differs from learner count");
  return std::make_shared<AdaBoostModel>(std::move(learners), std::move(alphas), params,
                                         doc.at("n_features").get<std::size_t>());
}

std::shared_ptr<AdaBoostModel> train_adaboost(const Matrix& X, std::span<const int> y, std::span<const double> w,
                                              const AdaBoostParams& params, std::vector<double>* weight_sums) {
  check_training(X, y, w);
  if (!(params.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  const std::size_t n = X.rows();
  auto D = base_weights(y, w, {});
  const auto rows = positive_rows(D);
  const double total = std::accumulate(D.begin(), D.end(), 0.0);
  for (auto& v : D) v /= total;
  if (weight_sums) weight_sums->clear();

  GrowParams grow;
  grow.max_depth = params.base_max_depth;
  std::vector<Tree> learners;
  std::vector<double> alphas;
  std::vector<int> h(n);
  constexpr double kMinError = 1e-10;
  for (std::size_t t = 0; t < params.n_estimators; ++t) {
    Tree tree = grow_classification_tree(X, y, D, rows, grow);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = tree.predict(X.row(i)) >= 0.5 ? 1 : -1;
      const int yi = y[i] == 1 ? 1 : -1;
      if (h[i] != yi) err += D[i];
    }
    if (err >= 0.5) break;
    const bool perfect = err <= 0.0;
    const double e = std::max(err, kMinError);
    const double alpha = params.learning_rate * 0.5 * std::log((1.0 - e) / e);
    learners.push_back(std::move(tree));
    alphas.push_back(alpha);
    if (perfect) break;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int yi = y[i] == 1 ? 1 : -1;
      D[i] *= std::exp(-alpha * yi * h[i]);
      s += D[i];
    }
    for (auto& v : D) v /= s;
    if (weight_sums) weight_sums->push_back(std::accumulate(D.begin(), D.end(), 0.0));
  }
  return std::make_shared<AdaBoostModel>(std::move(learners), std::move(alphas), params, X.cols());
}

// ---------------------------------------------------------- naive bayes

ProbaPair NaiveBayesModel::predict_proba_row(std::span<const double> x) const {
  check_width(x);
  std::array<double, 2> logp{};
  for (int c = 0; c < 2; ++c) {
    double l = std::log(priors_[c]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = variances_[c][j];
      const double z = x[j] - means_[c][j];
      l -= 0.5 * std::log(2.0 * std::numbers::pi * v) + z * z / (2.0 * v);
    }
    logp[c] = l;
  }
  return make_pair_from_p1(sigmoid(logp[1] - logp[0]));
}

nlohmann::json NaiveBayesModel::to_json() const {
  return {{"kind", kind()},         {"priors", priors_},       {"means0", means_[0]}, {"means1", means_[1]},
          {"var0", variances_[0]}, {"var1", variances_[1]}, {"epsilon", epsilon_}};
}

std::shared_ptr<NaiveBayesModel> NaiveBayesModel::from_json(const nlohmann::json& doc) {
  std::array<std::vector<double>, 2> means{doc.at("means0").get<std::vector<double>>(),
                                           doc.at("means1").get<std::vector<double>>()};
  std::array<std::vector<double>, 2> vars{doc.at("var0").get<std::vector<double>>(),
                                          doc.at("var1").get<std::vector<double>>()};
  const auto d = means[0].size();
  if (means[1].size() != d || vars[0].size() != d || vars[1].size() != d) throw ParseError("naive bayes: shape mismatch");
  return std::make_shared<NaiveBayesModel>(doc.at("priors").get<std::array<double, 2>>(), std::move(means),
                                           std::move(vars), doc.at("epsilon").get<double>());
}

std::shared_ptr<NaiveBayesModel> train_naive_bayes(const Matrix& X, std::span<const int> y, std::span<const double> w,
                                                   double var_smoothing) {
  check_training(X, y, w);
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  const auto weights = base_weights(y, w, {});
  std::array<double, 2> W{};
  std::array<std::vector<double>, 2> mean{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::array<std::vector<double>, 2> var{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::vector<double> all_mean(d, 0.0);
  std::vector<double> all_var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    W[y[i]] += weights[i];
    for (std::size_t j = 0; j < d; ++j) {
      mean[y[i]][j] += weights[i] * X(i, j);
      all_mean[j] += weights[i] * X(i, j);
    }
  }
  if (W[0] <= 0.0 || W[1] <= 0.0) throw DegenerateInput("naive bayes needs both classes present");
  const double Wt = W[0] + W[1];
  for (int c = 0; c < 2; ++c) {
    for (auto& m : mean[c]) m /= W[c];
  }
  for (auto& m : all_mean) m /= Wt;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double z = X(i, j) - mean[y[i]][j];
      var[y[i]][j] += weights[i] * z * z;
      const double a = X(i, j) - all_mean[j];
      all_var[j] += weights[i] * a * a;
    }
  }
  const double max_var = *std::max_element(all_var.begin(), all_var.end()) / Wt;
  double eps = var_smoothing * max_var;
  if (!(eps > 0.0)) eps = var_smoothing > 0.0 ? var_smoothing : 1e-9;
  for (int c = 0; c < 2; ++c) {
    for (auto& v : var[c]) v = v / W[c] + eps;
  }
  return std::make_shared<NaiveBayesModel>(std::array<double, 2>{W[0] / Wt, W[1] / Wt}, std::move(mean),
                                           std::move(var), eps);
}

// ------------------------------------------------------------ logistic

double logistic_objective(const Matrix& Z, std::span<const int> y, std::span<const double> w,
                          std::span<const double> beta, double C, std::vector<double>* grad) {
  const std::size_t n = Z.rows();
  const std::size_t d = Z.cols();
  if (beta.size() != d + 1) throw DimensionMismatch("logistic objective: beta must have d + 1 entries");
  const double W = std::accumulate(w.begin(), w.end(), 0.0);
  double loss = 0.0;
  if (grad) grad->assign(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double z = beta[0];
    const auto row = Z.row(i);
    for (std::size_t j = 0; j < d; ++j) z += beta[j + 1] * row[j];
    loss += w[i] * (softplus(z) - y[i] * z);
    if (grad) {
      const double g = w[i] * (sigmoid(z) - y[i]);
      (*grad)[0] += g;
      for (std::size_t j = 0; j < d; ++j) (*grad)[j + 1] += g * row[j];
    }
  }
  double reg = 0.0;
  for (std::size_t j = 1; j <= d; ++j) reg += beta[j] * beta[j];
  const double lam = 1.0 / (C * W);
  if (grad) {
    for (auto& g : *grad) g /= W;
    for (std::size_t j = 1; j <= d; ++j) (*grad)[j] += lam * beta[j];
  }
  return loss / W + 0.5 * lam * reg;
}

ProbaPair LogisticRegressionModel::predict_proba_row(std::span<const double> x) const {
  check_width(x);
  double z = intercept_;
  for (std::size_t j = 0; j < x.size(); ++j) z += coef_[j] * x[j];
  return make_pair_from_p1(sigmoid(z));
}

nlohmann::json LogisticRegressionModel::to_json() const {
  return {{"kind", kind()},
          {"params", {{"C", params_.C}, {"max_iter", params_.max_iter}, {"tol", params_.tol}}},
          {"intercept", intercept_},
          {"coef", coef_},
          {"iterations", iterations_}};
}

std::shared_ptr<LogisticRegressionModel> LogisticRegressionModel::from_json(const nlohmann::json& doc) {
  const auto& p = doc.at("params");
  LogisticParams params{p.at("C").get<double>(), p.at("max_iter").get<int>(), p.at("tol").get<double>()};
  return std::make_shared<LogisticRegressionModel>(doc.at("intercept").get<double>(),
                                                   doc.at("coef").get<std::vector<double>>(), params,
                                                   doc.at("iterations").get<int>());
}

std::shared_ptr<LogisticRegressionModel> train_logistic_regression(const Matrix& X, std::span<const int> y,
                                                                   std::span<const double> w,
                                                                   const LogisticParams& params) {
  check_training(X, y, w);
  if (!(params.C > 0.0)) throw InvalidArgument("C must be positive");
  const auto weights = base_weights(y, w, {});
  std::vector<double> mean;
  std::vector<double> scale;
  Matrix Z;
  standardize(X, weights, mean, scale, Z);
  const std::size_t d = X.cols();

  std::vector<double> beta(d + 1, 0.0);
  std::vector<double> grad;
  std::vector<double> next(d + 1);
  std::vector<double> next_grad;
  double f = logistic_objective(Z, y, weights, beta, params.C, &grad);
  double step = 1.0;
  int iter = 0;
  for (; iter < params.max_iter; ++iter) {
    double gmax = 0.0;
    double gnorm2 = 0.0;
    for (double g : grad) {
      gmax = std::max(gmax, std::abs(g));
      gnorm2 += g * g;
    }
    if (gmax < params.tol) break;
    // Backtracking (Armijo) from the Barzilai-Borwein proposal.
    double f_next = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j <= d; ++j) next[j] = beta[j] - step * grad[j];
      f_next = logistic_objective(Z, y, weights, next, params.C, &next_grad);
      if (f_next <= f - 1e-4 * step * gnorm2) break;
      step *= 0.5;
    }
    double sy = 0.0;
    double yy = 0.0;
    for (std::size_t j = 0; j <= d; ++j) {
      const double s = next[j] - beta[j];
      const double g = next_grad[j] - grad[j];
      sy += s * g;
      yy += g * g;
    }
    const bool stalled = f_next >= f;
    beta.swap(next);
    grad.swap(next_grad);
    f = f_next;
    if (stalled) break;
    step = (sy > 0.0 && yy > 0.0) ? sy / yy : step * 2.0;
  }

  std::vector<double> coef(d);
  double intercept = beta[0];
  for (std::size_t j = 0; j < d; ++j) {
    coef[j] = beta[j + 1] / scale[j];
    intercept -= coef[j] * mean[j];
  }
  return std::make_shared<LogisticRegressionModel>(intercept, std::move(coef), params, iter);
}

// ----------------------------------------------------------------- svm

double LinearSvmModel::decision(std::span<const double> x) const {
  check_width(x);
  double z = bias_;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights_[j] * x[j];
  return z;
}

ProbaPair LinearSvmModel::predict_proba_row(std::span<const double> x) const {
  return make_pair_from_p1(sigmoid(platt_a_ * decision(x) + platt_c_));
}

nlohmann::json LinearSvmModel::to_json() const {
  return {{"kind", kind()},
          {"params", {{"C", params_.C}, {"epochs", params_.epochs}, {"step", params_.step}}},
          {"weights", weights_},
          {"bias", bias_},
          {"platt_a", platt_a_},
          {"platt_c", platt_c_}};
}

std::shared_ptr<LinearSvmModel> LinearSvmModel::from_json(const nlohmann::json& doc) {
  const auto& p = doc.at("params");
  SvmParams params{p.at("C").get<double>(), p.at("epochs").get<int>(), p.at("step").get<double>()};
  return std::make_shared<LinearSvmModel>(doc.at("weights").get<std::vector<double>>(), doc.at("bias").get<double>(),
                                          doc.at("platt_a").get<double>(), doc.at("platt_c").get<double>(), params);
}

std::pair<double, double> fit_platt(std::span<const double> f, std::span<const int> y) {
  if (f.size() != y.size() || f.empty()) throw DimensionMismatch("platt: size mismatch");
  double n_pos = 0.0;
  for (int v : y) n_pos += v;
  const double n_neg = static_cast<double>(y.size()) - n_pos;
  const double hi = (n_pos + 1.0) / (n_pos + 2.0);
  const double lo = 1.0 / (n_neg + 2.0);
  std::vector<double> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t[i] = y[i] == 1 ? hi : lo;

  // Newton iterations with backtracking on P = 1 / (1 + exp(A f + B)).
  double A = 0.0;
  double B = std::log((n_neg + 1.0) / (n_pos + 1.0));
  auto objective = [&](double a, double b) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double z = a * f[i] + b;
      v += t[i] * z + softplus(-z);
    }
    return v;
  };
  double fval = objective(A, B);
  constexpr double kSigma = 1e-12;
  for (int it = 0; it < 100; ++it) {
    double h11 = kSigma;
    double h22 = kSigma;
    double h21 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double z = A * f[i] + B;
      const double p = sigmoid(-z);
      const double q = 1.0 - p;
      const double d2 = p * q;
      h11 += f[i] * f[i] * d2;
      h22 += d2;
      h21 += f[i] * d2;
      const double d1 = t[i] - p;
      g1 += f[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double stepsize = 1.0;
    bool moved = false;
    while (stepsize >= 1e-10) {
      const double nA = A + stepsize * dA;
      const double nB = B + stepsize * dB;
      const double nf = objective(nA, nB);
      if (nf < fval + 1e-4 * stepsize * gd) {
        A = nA;
        B = nB;
        fval = nf;
        moved = true;
        break;
      }
      stepsize /= 2.0;
    }
    if (!moved) break;
  }
  return {-A, -B};
}

std::shared_ptr<LinearSvmModel> train_linear_svm(const Matrix& X, std::span<const int> y, std::span<const double> w,
                                                 const SvmParams& params) {
  check_training(X, y, w);
  if (!(params.C > 0.0) || params.epochs < 1 || !(params.step > 0.0)) {
    throw InvalidArgument("svm: C, epochs and step must be positive");
  }
  const auto weights = base_weights(y, w, {});
  std::vector<double> mean;
  std::vector<double> scale;
  Matrix Z;
  standardize(X, weights, mean, scale, Z);
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  const double W = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double lam = 1.0 / (params.C * W);

  std::vector<double> v(d, 0.0);
  double b = 0.0;
  std::vector<double> best_v = v;
  double best_b = b;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> gv(d);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    double hinge = 0.0;
    std::fill(gv.begin(), gv.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = y[i] == 1 ? 1.0 : -1.0;
      double m = b;
      const auto row = Z.row(i);
      for (std::size_t j = 0; j < d; ++j) m += v[j] * row[j];
      const double slack = 1.0 - yi * m;
      if (slack > 0.0) {
        hinge += weights[i] * slack;
        for (std::size_t j = 0; j < d; ++j) gv[j] -= weights[i] * yi * row[j];
        gb -= weights[i] * yi;
      }
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const double obj = 0.5 * lam * norm2 + hinge / W;
    if (obj < best_obj) {
      best_obj = obj;
      best_v = v;
      best_b = b;
    }
    const double eta = params.step / std::sqrt(static_cast<double>(epoch) + 1.0);
    for (std::size_t j = 0; j < d; ++j) v[j] -= eta * (lam * v[j] + gv[j] / W);
    b -= eta * gb / W;
  }

  std::vector<double> coef(d);
  double bias = best_b;
  for (std::size_t j = 0; j < d; ++j) {
    coef[j] = best_v[j] / scale[j];
    bias -= coef[j] * mean[j];
  }
  std::vector<double> margins(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = bias;
    for (std::size_t j = 0; j < d; ++j) m += coef[j] * X(i, j);
    margins[i] = m;
  }
  const auto [a, c] = fit_platt(margins, y);
  return std::make_shared<LinearSvmModel>(std::move(coef), bias, a, c, params);
}

// ------------------------------------------------------------- voting

VotingEnsembleModel::VotingEnsembleModel(std::vector<ModelPtr> members, std::vector<double> weights,
                                         std::vector<std::string> names)
    : members_(std::move(members)), weights_(std::move(weights)), names_(std::move(names)) {
  if (members_.empty()) throw InvalidArgument("voting ensemble needs at least one member");
  if (weights_.empty()) weights_.assign(members_.size(), 1.0);
  if (weights_.size() != members_.size()) throw InvalidArgument("voting ensemble: weight count differs from members");
  if (names_.empty()) {
    for (const auto& m : members_) names_.push_back(m->kind());
  }
  if (names_.size() != members_.size()) throw InvalidArgument("voting ensemble: name count differs from members");
  double s = 0.0;
  for (double v : weights_) {
    if (!(v >= 0.0)) throw InvalidArgument("voting weights must be non-negative");
    s += v;
  }
  if (!(s > 0.0)) throw InvalidArgument("voting weights must not all be zero");
  for (const auto& m : members_) {
    if (m->n_features() != members_.front()->n_features()) {
      throw DimensionMismatch("voting members disagree on feature count");
    }
  }
}

ProbaPair VotingEnsembleModel::predict_proba_row(std::span<const double> x) const {
  check_width(x);
  double p1 = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    p1 += weights_[k] * members_[k]->predict_proba_row(x)[1];
    s += weights_[k];
  }
  return make_pair_from_p1(p1 / s);
}

nlohmann::json VotingEnsembleModel::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : members_) members.push_back(m->to_json());
  return {{"kind", kind()}, {"weights", weights_}, {"names", names_}, {"members", members}};
}

std::shared_ptr<VotingEnsembleModel> VotingEnsembleModel::from_json(const nlohmann::json& doc) {
  std::vector<ModelPtr> members;
  for (const auto& m : doc.at("members")) members.push_back(model_from_json(m));
  return std::make_shared<VotingEnsembleModel>(std::move(members), doc.at("weights").get<std::vector<double>>(),
                                               doc.at("names").get<std::vector<std::string>>());
}

std::shared_ptr<VotingEnsembleModel> build_voting_ensemble(std::vector<ModelPtr> members, std::vector<double> weights,
                                                           std::vector<std::string> names) {
  return std::make_shared<VotingEnsembleModel>(std::move(members), std::move(weights), std::move(names));
}

// ------------------------------------------------------------- factory

namespace {

class ParamReader {
 public:
  ParamReader(const ModelSpec& spec, std::set<std::string> allowed) : spec_(spec) {
    if (!spec.params.is_object()) throw InvalidArgument(spec.kind + ": params must be an object");
    allowed.insert("random_state");
    for (const auto& [k, v] : spec.params.items()) {
      if (!allowed.count(k)) throw InvalidArgument(spec.kind + ": unknown parameter '" + k + "'");
    }
  }

  bool has(const std::string& key) const { return spec_.params.contains(key); }
  const nlohmann::json& at(const std::string& key) const { return spec_.params.at(key); }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument(spec_.kind + ": parameter '" + key + "' has the wrong type");
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 1) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
      throw InvalidArgument(spec_.kind + ": parameter '" + key + "' must be an integer >= " + std::to_string(min));
    }
    return v.get<std::size_t>();
  }

  int depth(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (v.is_null()) return -1;
    if (!v.is_number_integer()) throw InvalidArgument(spec_.kind + ": " + key + " must be an integer or null");
    return v.get<int>();
  }

  double positive(const std::string& key, double fallback) const {
    const double v = get<double>(key, fallback);
    if (!(v > 0.0)) throw InvalidArgument(spec_.kind + ": parameter '" + key + "' must be positive");
    return v;
  }

  void require_choice(const std::string& key, const std::set<std::string>& options) const {
    if (!has(key)) return;
    const auto v = get<std::string>(key, "");
    if (!options.count(v)) throw InvalidArgument(spec_.kind + ": unsupported " + key + " '" + v + "'");
  }

 private:
  const ModelSpec& spec_;
};

TreeParams tree_params(const ModelSpec& spec) {
  ParamReader p(spec, {"max_depth", "min_samples_split", "min_samples_leaf", "criterion", "class_weight"});
  p.require_choice("criterion", {"gini"});
  TreeParams out;
  out.max_depth = p.depth("max_depth", -1);
  out.min_samples_split = p.count("min_samples_split", 2, 2);
  out.min_samples_leaf = p.count("min_samples_leaf", 1);
  if (p.has("class_weight")) out.class_weight = class_weight_from_json(p.at("class_weight"));
  return out;
}

ForestParams forest_params(const ModelSpec& spec) {
  ParamReader p(spec, {"n_estimators", "max_depth", "min_samples_split", "min_samples_leaf", "max_features",
                       "bootstrap", "criterion", "class_weight"});
  p.require_choice("criterion", {"gini"});
  ForestParams out;
  out.n_estimators = p.count("n_estimators", out.n_estimators);
  out.max_depth = p.depth("max_depth", out.max_depth);
  out.min_samples_split = p.count("min_samples_split", 2, 2);
  out.min_samples_leaf = p.count("min_samples_leaf", 1);
  if (p.has("max_features")) {
    const auto& v = p.at("max_features");
    out.max_features = v.is_number_integer() ? std::to_string(v.get<long long>())
                       : v.is_null()         ? "all"
                                             : p.get<std::string>("max_features", "");
    resolve_max_features(out.max_features, 1);
  }
  out.bootstrap = p.get<bool>("bootstrap", true);
  if (p.has("class_weight")) out.class_weight = class_weight_from_json(p.at("class_weight"));
  return out;
}

BoostParams boost_params(const ModelSpec& spec) {
  ParamReader p(spec, {"n_estimators", "learning_rate", "max_depth", "num_leaves", "feature_fraction",
                       "colsample_bytree", "min_samples_leaf", "min_data_in_leaf", "growth"});
  BoostParams out;
  if (spec.kind == "gradient_boosting") {
    out.n_estimators = 500;
    out.learning_rate = 1.0;
    out.max_depth = 1;
  } else if (spec.kind == "lgb") {
    out.n_estimators = 100;
    out.learning_rate = 0.05;
    out.growth = Growth::kLeafwise;
    out.num_leaves = 31;
    out.max_depth = -1;
    out.feature_fraction = 0.9;
    out.min_samples_leaf = 20;
  } else {
    out.n_estimators = 100;
    out.learning_rate = 0.3;
    out.max_depth = 6;
  }
  p.require_choice("growth", {"depthwise", "leafwise"});
  if (p.has("growth")) out.growth = p.get<std::string>("growth", "") == "leafwise" ? Growth::kLeafwise : Growth::kDepthwise;
  out.n_estimators = p.count("n_estimators", out.n_estimators, 0);
  out.learning_rate = p.positive("learning_rate", out.learning_rate);
  out.max_depth = p.depth("max_depth", out.max_depth);
  out.num_leaves = p.count("num_leaves", out.num_leaves, 2);
  out.feature_fraction = p.positive("feature_fraction", p.positive("colsample_bytree", out.feature_fraction));
  if (out.feature_fraction > 1.0) throw InvalidArgument(spec.kind + ": feature_fraction must not exceed 1");
  out.min_samples_leaf = p.count("min_samples_leaf", p.count("min_data_in_leaf", out.min_samples_leaf));
  return out;
}

AdaBoostParams adaboost_params(const ModelSpec& spec) {
  ParamReader p(spec, {"n_estimators", "learning_rate", "base_max_depth"});
  AdaBoostParams out;
  out.n_estimators = p.count("n_estimators", out.n_estimators);
  out.learning_rate = p.positive("learning_rate", out.learning_rate);
  out.base_max_depth = static_cast<int>(p.count("base_max_depth", 1));
  return out;
}

LogisticParams logistic_params(const ModelSpec& spec) {
  ParamReader p(spec, {"C", "penalty", "solver", "max_iter", "tol"});
  p.require_choice("penalty", {"l2"});
  p.require_choice("solver", {"liblinear", "lbfgs", "gd"});
  LogisticParams out;
  out.C = p.positive("C", out.C);
  out.max_iter = static_cast<int>(p.count("max_iter", static_cast<std::size_t>(out.max_iter)));
  out.tol = p.positive("tol", out.tol);
  return out;
}

SvmParams svm_params(const ModelSpec& spec) {
  ParamReader p(spec, {"C", "kernel", "max_iter", "step"});
  p.require_choice("kernel", {"linear"});
  SvmParams out;
  out.C = p.positive("C", out.C);
  out.epochs = static_cast<int>(p.count("max_iter", static_cast<std::size_t>(out.epochs)));
  out.step = p.positive("step", out.step);
  return out;
}

double nb_smoothing(const ModelSpec& spec) {
  ParamReader p(spec, {"var_smoothing"});
  return p.positive("var_smoothing", 1e-9);
}

std::vector<ModelSpec> voting_members(const ModelSpec& spec, std::vector<double>& weights) {
  ParamReader p(spec, {"members", "weights"});
  if (!p.has("members") || !p.at("members").is_array() || p.at("members").empty()) {
    throw InvalidArgument("voting: members must be a non-empty list of model specs");
  }
  std::vector<ModelSpec> out;
  for (const auto& m : p.at("members")) out.push_back(ModelSpec::from_json(m));
  weights = p.get<std::vector<double>>("weights", {});
  if (!weights.empty() && weights.size() != out.size()) throw InvalidArgument("voting: weight count differs from members");
  return out;
}

}  // namespace

nlohmann::json ModelSpec::to_json() const { return {{"name", name}, {"kind", kind}, {"params", params}}; }

ModelSpec ModelSpec::from_json(const nlohmann::json& doc) {
  ModelSpec spec;
  spec.kind = doc.at("kind").get<std::string>();
  spec.name = doc.value("name", spec.kind);
  spec.params = doc.value("params", nlohmann::json::object());
  return spec;
}

const std::vector<std::string>& model_kinds() {
  static const std::vector<std::string> kinds{"decision_tree", "random_forest", "gradient_boosting",
                                              "lgb",           "xgboost",       "adaboost",
                                              "naive_bayes",   "logistic_regression", "svc",
                                              "voting"};
  return kinds;
}

void validate(const ModelSpec& spec) {
  const auto& k = spec.kind;
  if (k == "decision_tree") {
    tree_params(spec);
  } else if (k == "random_forest") {
    forest_params(spec);
  } else if (k == "gradient_boosting" || k == "lgb" || k == "xgboost") {
    boost_params(spec);
  } else if (k == "adaboost") {
    adaboost_params(spec);
  } else if (k == "naive_bayes") {
    nb_smoothing(spec);
  } else if (k == "logistic_regression") {
    logistic_params(spec);
  } else if (k == "svc") {
    svm_params(spec);
  } else if (k == "voting") {
    std::vector<double> weights;
    for (const auto& m : voting_members(spec, weights)) validate(m);
  } else {
    throw InvalidArgument("unknown model kind '" + k + "'");
  }
}

ModelPtr fit_model(const ModelSpec& spec, const Matrix& X, std::span<const int> y, std::span<const double> w,
                   std::uint64_t seed) {
  validate(spec);
  if (spec.params.contains("random_state")) {
    const auto& rs = spec.params.at("random_state");
    if (!rs.is_number_integer()) throw InvalidArgument(spec.kind + ": random_state must be an integer");
    seed = rs.get<std::uint64_t>();
  }
  const auto& k = spec.kind;
  if (k == "decision_tree") return train_decision_tree(X, y, w, tree_params(spec));
  if (k == "random_forest") return train_random_forest(X, y, w, forest_params(spec), seed);
  if (k == "gradient_boosting" || k == "lgb" || k == "xgboost") {
    return train_gradient_boosting(X, y, w, boost_params(spec), seed, k);
  }
  if (k == "adaboost") return train_adaboost(X, y, w, adaboost_params(spec));
  if (k == "naive_bayes") return train_naive_bayes(X, y, w, nb_smoothing(spec));
  if (k == "logistic_regression") return train_logistic_regression(X, y, w, logistic_params(spec));
  if (k == "svc") return train_linear_svm(X, y, w, svm_params(spec));
  std::vector<double> weights;
  const auto members = voting_members(spec, weights);
  std::vector<ModelPtr> fitted;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < members.size(); ++i) {
    fitted.push_back(fit_model(members[i], X, y, w, derive_seed(seed, i)));
    names.push_back(members[i].name);
  }
  return build_voting_ensemble(std::move(fitted), std::move(weights), std::move(names));
}

ModelPtr model_from_json(const nlohmann::json& doc) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "decision_tree") return DecisionTreeModel::from_json(doc);
    if (kind == "random_forest") return RandomForestModel::from_json(doc);
    if (kind == "gradient_boosting" || kind == "lgb" || kind == "xgboost") return BoostedEnsembleModel::from_json(doc);
    if (kind == "adaboost") return AdaBoostModel::from_json(doc);
    if (kind == "naive_bayes") return NaiveBayesModel::from_json(doc);
    if (kind == "logistic_regression") return LogisticRegressionModel::from_json(doc);
    if (kind == "svc") return LinearSvmModel::from_json(doc);
    if (kind == "voting") return VotingEnsembleModel::from_json(doc);
    throw ParseError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace lifesat
