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

#ifndef LIFESAT_LEARNERS_HPP_
#define LIFESAT_LEARNERS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lifesat/common.hpp"
#include "lifesat/tree.hpp"

namespace lifesat {

using ProbaPair = std::array<double, 2>;

// Shared contract of every fitted model. Fitted models are immutable.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t n_features() const = 0;
  // {P(Discontent), P(Content)}; the pair sums to 1.
  virtual ProbaPair predict_proba_row(std::span<const double> x) const = 0;
  // Argmax of the probability pair, ties to class 1.
  virtual int predict_row(std::span<const double> x) const;
  virtual nlohmann::json to_json() const = 0;

  std::vector<ProbaPair> predict_proba(const Matrix& X) const;
  std::vector<int> predict(const Matrix& X) const;

 protected:
  void check_width(std::span<const double> x) const;
};

using ModelPtr = std::shared_ptr<const Classifier>;

ProbaPair make_pair_from_p1(double p1);

// ---------------------------------------------------------------- trees

struct TreeParams {
  int max_depth = -1;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  // Multipliers applied to sample weights per class.
  std::map<int, double> class_weight;
};

class DecisionTreeModel final : public Classifier {
 public:
  DecisionTreeModel(Tree tree, TreeParams params) : tree_(std::move(tree)), params_(std::move(params)) {}

  std::string kind() const override { return "decision_tree"; }
  std::size_t n_features() const override { return tree_.n_features; }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<DecisionTreeModel> from_json(const nlohmann::json& doc);

  const Tree& tree() const { return tree_; }
  const TreeParams& params() const { return params_; }

 private:
  Tree tree_;
  TreeParams params_;
};

// `w` may be empty for unit weights.
std::shared_ptr<DecisionTreeModel> train_decision_tree(const Matrix& X, std::span<const int> y,
                                                       std::span<const double> w, const TreeParams& params);

struct ForestParams {
  std::size_t n_estimators = 600;
  int max_depth = 780;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  // "sqrt", "log2", "all", or a positive integer as text.
  std::string max_features = "log2";
  bool bootstrap = true;
  std::map<int, double> class_weight;
};

std::size_t resolve_max_features(const std::string& rule, std::size_t n_features);

class RandomForestModel final : public Classifier {
 public:
  RandomForestModel(std::vector<Tree> trees, ForestParams params, std::vector<std::uint64_t> seeds)
      : trees_(std::move(trees)), params_(std::move(params)), seeds_(std::move(seeds)) {}

  std::string kind() const override { return "random_forest"; }
  std::size_t n_features() const override { return trees_.front().n_features; }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<RandomForestModel> from_json(const nlohmann::json& doc);

  const std::vector<Tree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  const std::vector<std::uint64_t>& tree_seeds() const { return seeds_; }

 private:
  std::vector<Tree> trees_;
  ForestParams params_;
  std::vector<std::uint64_t> seeds_;
};

std::shared_ptr<RandomForestModel> train_random_forest(const Matrix& X, std::span<const int> y,
                                                       std::span<const double> w, const ForestParams& params,
                                                       std::uint64_t seed);

// Mean over trees of per-tree normalized Gini decrease; sums to 1 unless
// no tree ever split (then all zero).
std::vector<double> impurity_importances(const RandomForestModel& forest);

// ------------------------------------------------------------- boosting

enum class Growth { kDepthwise, kLeafwise };

struct BoostParams {
  std::size_t n_estimators = 100;
  double learning_rate = 0.1;
  Growth growth = Growth::kDepthwise;
  int max_depth = 3;
  std::size_t num_leaves = 31;
  double feature_fraction = 1.0;
  std::size_t min_samples_leaf = 1;
};

class BoostedEnsembleModel final : public Classifier {
 public:
  BoostedEnsembleModel(std::string kind, double init, std::vector<Tree> stages, BoostParams params)
      : kind_(std::move(kind)), init_(init), stages_(std::move(stages)), params_(params) {}

  std::string kind() const override { return kind_; }
  std::size_t n_features() const override { return n_features_; }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<BoostedEnsembleModel> from_json(const nlohmann::json& doc);

  // init + sum of learning_rate * stage output over the first `stages`
  // stages (all when omitted).
  double raw_score(std::span<const double> x, std::size_t stages = static_cast<std::size_t>(-1)) const;
  double init() const { return init_; }
  const std::vector<Tree>& stages() const { return stages_; }
  const BoostParams& params() const { return params_; }

  void set_n_features(std::size_t n) { n_features_ = n; }

 private:
  std::string kind_;
  double init_;
  std::vector<Tree> stages_;
  BoostParams params_;
  std::size_t n_features_ = 0;
};

// Logistic-loss boosting. `kind` tags the model ("gradient_boosting",
// "lgb", "xgboost"). When `staged_loss` is given it receives the weighted
// mean training log-loss after init and after every stage.
std::shared_ptr<BoostedEnsembleModel> train_gradient_boosting(const Matrix& X, std::span<const int> y,
                                                              std::span<const double> w, const BoostParams& params,
                                                              std::uint64_t seed,
                                                              const std::string& kind = "gradient_boosting",
                                                              std::vector<double>* staged_loss = nullptr);

// ------------------------------------------------------------- adaboost

struct AdaBoostParams {
  std::size_t n_estimators = 600;
  double learning_rate = 1.0;
  int base_max_depth = 1;
};

class AdaBoostModel final : public Classifier {
 public:
  AdaBoostModel(std::vector<Tree> learners, std::vector<double> alphas, AdaBoostParams params, std::size_t d)
      : learners_(std::move(learners)), alphas_(std::move(alphas)), params_(params), n_features_(d) {}

  std::string kind() const override { return "adaboost"; }
  std::size_t n_features() const override { return n_features_; }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  int predict_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<AdaBoostModel> from_json(const nlohmann::json& doc);

  // Sum of alpha_t * h_t(x) with h_t in {-1, +1}.
  double margin(std::span<const double> x) const;
  // Weak learner vote in {-1, +1}.
  int vote(std::size_t t, std::span<const double> x) const;
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<Tree>& learners() const { return learners_; }

 private:
  std::vector<Tree> learners_;
  std::vector<double> alphas_;
  AdaBoostParams params_;
  std::size_t n_features_;
};

// `weight_sums` receives the sample-weight total after each round.
std::shared_ptr<AdaBoostModel> train_adaboost(const Matrix& X, std::span<const int> y, std::span<const double> w,
                                              const AdaBoostParams& params,
                                              std::vector<double>* weight_sums = nullptr);

// ---------------------------------------------------------- naive bayes

class NaiveBayesModel final : public Classifier {
 public:
  NaiveBayesModel(std::array<double, 2> priors, std::array<std::vector<double>, 2> means,
                  std::array<std::vector<double>, 2> variances, double epsilon)
      : priors_(priors), means_(std::move(means)), variances_(std::move(variances)), epsilon_(epsilon) {}

  std::string kind() const override { return "naive_bayes"; }
  std::size_t n_features() const override { return means_[0].size(); }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<NaiveBayesModel> from_json(const nlohmann::json& doc);

  const std::array<double, 2>& priors() const { return priors_; }
  const std::array<std::vector<double>, 2>& means() const { return means_; }
  // Floored variances (epsilon already added).
  const std::array<std::vector<double>, 2>& variances() const { return variances_; }
  double epsilon() const { return epsilon_; }

 private:
  std::array<double, 2> priors_;
  std::array<std::vector<double>, 2> means_;
  std::array<std::vector<double>, 2> variances_;
  double epsilon_;
};

std::shared_ptr<NaiveBayesModel> train_naive_bayes(const Matrix& X, std::span<const int> y, std::span<const double> w,
                                                   double var_smoothing = 1e-9);

// ------------------------------------------------------------ linear

struct LogisticParams {
  double C = 1.0;
  int max_iter = 10000;
  double tol = 1e-6;
};

// Objective minimized on standardized features Z:
//   sum_i w_i logloss_i / W + |beta|^2 / (2 C W),  W = sum_i w_i,
// with beta = {b0, b1..bp} and b0 unpenalized. Fills `grad` when given.
double logistic_objective(const Matrix& Z, std::span<const int> y, std::span<const double> w,
                          std::span<const double> beta, double C, std::vector<double>* grad);

class LogisticRegressionModel final : public Classifier {
 public:
  LogisticRegressionModel(double intercept, std::vector<double> coef, LogisticParams params, int iterations)
      : intercept_(intercept), coef_(std::move(coef)), params_(params), iterations_(iterations) {}

  std::string kind() const override { return "logistic_regression"; }
  std::size_t n_features() const override { return coef_.size(); }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<LogisticRegressionModel> from_json(const nlohmann::json& doc);

  double intercept() const { return intercept_; }
  const std::vector<double>& coefficients() const { return coef_; }
  int iterations() const { return iterations_; }

 private:
  double intercept_;
  std::vector<double> coef_;
  LogisticParams params_;
  int iterations_;
};

std::shared_ptr<LogisticRegressionModel> train_logistic_regression(const Matrix& X, std::span<const int> y,
                                                                   std::span<const double> w,
                                                                   const LogisticParams& params = {});

struct SvmParams {
  double C = 1.0;
  int epochs = 1000;
  double step = 1.0;
};

class LinearSvmModel final : public Classifier {
 public:
  LinearSvmModel(std::vector<double> weights, double bias, double platt_a, double platt_c, SvmParams params)
      : weights_(std::move(weights)), bias_(bias), platt_a_(platt_a), platt_c_(platt_c), params_(params) {}

  std::string kind() const override { return "svc"; }
  std::size_t n_features() const override { return weights_.size(); }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<LinearSvmModel> from_json(const nlohmann::json& doc);

  double decision(std::span<const double> x) const;
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_;
  double platt_a_;
  double platt_c_;
  SvmParams params_;
};

std::shared_ptr<LinearSvmModel> train_linear_svm(const Matrix& X, std::span<const int> y, std::span<const double> w,
                                                 const SvmParams& params = {});

// Platt scaling: fits P(y=1|f) = sigmoid(a f + c) on decision values.
std::pair<double, double> fit_platt(std::span<const double> f, std::span<const int> y);

// ------------------------------------------------------------- voting

class VotingEnsembleModel final : public Classifier {
 public:
  VotingEnsembleModel(std::vector<ModelPtr> members, std::vector<double> weights, std::vector<std::string> names);

  std::string kind() const override { return "voting"; }
  std::size_t n_features() const override { return members_.front()->n_features(); }
  ProbaPair predict_proba_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::shared_ptr<VotingEnsembleModel> from_json(const nlohmann::json& doc);

  const std::vector<ModelPtr>& members() const { return members_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<ModelPtr> members_;
  std::vector<double> weights_;
  std::vector<std::string> names_;
};

// Empty `weights` means equal weights.
std::shared_ptr<VotingEnsembleModel> build_voting_ensemble(std::vector<ModelPtr> members,
                                                           std::vector<double> weights = {},
                                                           std::vector<std::string> names = {});

// ------------------------------------------------------------- factory

// A learner kind plus hyperparameters under their conventional names
// (n_estimators, learning_rate, max_depth, num_leaves, feature_fraction,
// max_features, class_weight, criterion, penalty, C, ...).
struct ModelSpec {
  std::string name;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& doc);
};

const std::vector<std::string>& model_kinds();

// Checks kind and parameter names/values without fitting.
void validate(const ModelSpec& spec);

// Fits `spec`; `w` may be empty. A `random_state` parameter overrides seed.
ModelPtr fit_model(const ModelSpec& spec, const Matrix& X, std::span<const int> y, std::span<const double> w,
                   std::uint64_t seed);

ModelPtr model_from_json(const nlohmann::json& doc);

}  // namespace lifesat

#endif  // LIFESAT_LEARNERS_HPP_
