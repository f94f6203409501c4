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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "../support/fixtures.hpp"
#include "lifesat/learners.hpp"
#include "lifesat/metrics.hpp"

namespace lifesat {
namespace {

ModelSpec spec_for(const std::string& kind) {
  if (kind != "voting") return {kind, kind, nlohmann::json::object()};
  nlohmann::json members = nlohmann::json::array();
  for (const char* k : {"random_forest", "gradient_boosting", "logistic_regression"}) {
    members.push_back({{"kind", k}, {"params", nlohmann::json::object()}});
  }
  return {"voting", "voting", {{"members", members}}};
}

double majority_rate(std::span<const int> y) {
  const auto c = class_counts(y);
  return static_cast<double>(std::max(c[0], c[1])) / static_cast<double>(y.size());
}

SplitPair planted_split(std::uint64_t seed) {
  return shuffle_split(fixtures::planted(2000, 3, 5, 0.5, seed), 0.8, seed + 1);
}

class LearnerBaseline : public ::testing::TestWithParam<std::string> {};

TEST_P(LearnerBaseline, BeatsMajorityByFifteenPointsOnFiveSeeds) {
  for (std::uint64_t seed : {21u, 42u, 63u, 84u, 105u}) {
    const auto s = planted_split(seed);
    const auto model = fit_model(spec_for(GetParam()), s.train.values, *s.train.labels, {}, seed);
    const auto report = evaluate(GetParam(), *model, s.test.values, *s.test.labels);
    EXPECT_GE(report.accuracy, majority_rate(*s.test.labels) + 0.15) << GetParam() << " seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, LearnerBaseline, ::testing::ValuesIn(model_kinds()),
                         [](const auto& info) { return info.param; });

TEST(Learners, JsonRoundTripKeepsPredictions) {
  const auto s = planted_split(7);
  for (const auto& kind : model_kinds()) {
    const auto model = fit_model(spec_for(kind), s.train.values, *s.train.labels, {}, 7);
    const auto back = model_from_json(model->to_json());
    EXPECT_EQ(back->kind(), model->kind());
    EXPECT_EQ(back->predict_proba(s.test.values), model->predict_proba(s.test.values)) << kind;
  }
}

TEST(Learners, ProbabilitiesArePairsSummingToOne) {
  const auto s = planted_split(8);
  for (const auto& kind : model_kinds()) {
    const auto model = fit_model(spec_for(kind), s.train.values, *s.train.labels, {}, 8);
    for (const auto& p : model->predict_proba(s.test.values)) {
      EXPECT_GE(p[0], 0.0);
      EXPECT_GE(p[1], 0.0);
      EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12) << kind;
    }
  }
}

TEST(Factory, RejectsUnknownKindAndParameter) {
  EXPECT_THROW(validate(ModelSpec{"x", "perceptron", {}}), InvalidArgument);
  EXPECT_THROW(validate(ModelSpec{"x", "random_forest", {{"n_trees", 3}}}), InvalidArgument);
  EXPECT_NO_THROW(validate(ModelSpec{"x", "random_forest", {{"n_estimators", 3}, {"random_state", 4}}}));
}

TEST(Factory, RandomStateOverridesSeed) {
  const auto s = planted_split(2);
  const ModelSpec spec{"rf", "random_forest", {{"n_estimators", 5}, {"random_state", 9}}};
  const auto a = fit_model(spec, s.train.values, *s.train.labels, {}, 1);
  const auto b = fit_model(spec, s.train.values, *s.train.labels, {}, 2);
  EXPECT_EQ(a->to_json(), b->to_json());
}

TEST(Boosting, AdditiveIdentityHoldsStageWise) {
  const auto s = planted_split(3);
  std::vector<double> loss;
  BoostParams p;
  p.n_estimators = 60;
  p.learning_rate = 0.3;
  p.max_depth = 2;
  const auto model = train_gradient_boosting(s.train.values, *s.train.labels, {}, p, 3, "gradient_boosting", &loss);
  ASSERT_EQ(model->stages().size(), 60u);
  ASSERT_EQ(loss.size(), 61u);
  for (std::size_t r = 0; r < 50; ++r) {
    const auto x = s.test.values.row(r);
    EXPECT_EQ(model->raw_score(x, 0), model->init());
    for (std::size_t m = 1; m <= model->stages().size(); ++m) {
      const double expected = model->raw_score(x, m - 1) + p.learning_rate * model->stages()[m - 1].predict(x);
      EXPECT_NEAR(model->raw_score(x, m), expected, 1e-9);
    }
    EXPECT_NEAR(model->predict_proba_row(x)[kContent], sigmoid(model->raw_score(x)), 1e-15);
  }
  EXPECT_LT(loss.back(), loss.front());
}

TEST(Boosting, LeafwiseTwoLeavesEqualsDepthOne) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = planted_split(seed);
    BoostParams depthwise;
    depthwise.n_estimators = 40;
    depthwise.max_depth = 1;
    BoostParams leafwise = depthwise;
    leafwise.growth = Growth::kLeafwise;
    leafwise.max_depth = -1;
    leafwise.num_leaves = 2;
    const auto a = train_gradient_boosting(s.train.values, *s.train.labels, {}, depthwise, seed);
    const auto b = train_gradient_boosting(s.train.values, *s.train.labels, {}, leafwise, seed);
    EXPECT_EQ(a->predict_proba(s.test.values), b->predict_proba(s.test.values));
  }
}

TEST(AdaBoost, PredictionIsSignOfWeightedVote) {
  const auto s = planted_split(4);
  AdaBoostParams p;
  p.n_estimators = 80;
  const auto model = train_adaboost(s.train.values, *s.train.labels, {}, p);
  ASSERT_EQ(model->alphas().size(), model->learners().size());
  for (std::size_t r = 0; r < s.test.rows(); ++r) {
    const auto x = s.test.values.row(r);
    double m = 0.0;
    for (std::size_t t = 0; t < model->learners().size(); ++t) {
      const int h = model->learners()[t].predict(x) >= 0.5 ? 1 : -1;
      m += model->alphas()[t] * h;
    }
    EXPECT_EQ(model->margin(x), m);
    EXPECT_EQ(model->predict_row(x), m >= 0.0 ? kContent : kDiscontent);
  }
}

TEST(Logistic, GradientMatchesCentralDifferences) {
  const auto ds = fixtures::planted(300, 3, 2, 0.6, 5);
  Rng rng(6);
  std::vector<double> w(ds.rows());
  for (auto& v : w) v = 0.5 + rng.uniform();
  for (double C : {0.1, 1.0, 10.0}) {
    std::vector<double> beta(ds.cols() + 1);
    for (auto& b : beta) b = rng.normal() * 0.5;
    std::vector<double> grad;
    logistic_objective(ds.values, *ds.labels, w, beta, C, &grad);
    ASSERT_EQ(grad.size(), beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const double h = 1e-5;
      auto hi = beta, lo = beta;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (logistic_objective(ds.values, *ds.labels, w, hi, C, nullptr) -
                         logistic_objective(ds.values, *ds.labels, w, lo, C, nullptr)) /
                        (2 * h);
      EXPECT_LE(std::abs(fd - grad[j]), 1e-5 * std::max(1.0, std::abs(grad[j]))) << "C " << C << " j " << j;
    }
  }
}

TEST(NaiveBayes, PosteriorsSumToOne) {
  const auto s = planted_split(9);
  const auto model = train_naive_bayes(s.train.values, *s.train.labels, {});
  for (std::size_t r = 0; r < s.test.rows(); ++r) {
    const auto p = model->predict_proba_row(s.test.values.row(r));
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-9);
  }
  EXPECT_NEAR(model->priors()[0] + model->priors()[1], 1.0, 1e-12);
}

TEST(Forest, ImportancesSumToOneAndFavourSignal) {
  const auto s = planted_split(10);
  ForestParams p;
  p.n_estimators = 50;
  const auto forest = train_random_forest(s.train.values, *s.train.labels, {}, p, 10);
  const auto imp = impurity_importances(*forest);
  double total = 0.0;
  for (double v : imp) total += v;
  EXPECT_NEAR(total, 1.0, 1e-9);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 3; j < imp.size(); ++j) EXPECT_GT(imp[i], imp[j]);
  }
}

TEST(Forest, ClassWeightShiftsTowardsWeightedClass) {
  const auto s = planted_split(11);
  const ModelSpec plain{"rf", "random_forest", {{"n_estimators", 30}, {"max_depth", 3}}};
  ModelSpec heavy = plain;
  heavy.params["class_weight"] = {{"0", 5}, {"1", 0.09}};
  const auto a = fit_model(plain, s.train.values, *s.train.labels, {}, 1);
  const auto b = fit_model(heavy, s.train.values, *s.train.labels, {}, 1);
  std::size_t pa = 0, pb = 0;
  for (int y : a->predict(s.test.values)) pa += y == kDiscontent;
  for (int y : b->predict(s.test.values)) pb += y == kDiscontent;
  EXPECT_GT(pb, pa);
}

TEST(Svm, PlattProbabilitiesAreMonotoneInDecision) {
  const auto s = planted_split(12);
  const auto model = train_linear_svm(s.train.values, *s.train.labels, {}, {});
  std::vector<std::pair<double, double>> pts;
  for (std::size_t r = 0; r < s.test.rows(); ++r) {
    const auto x = s.test.values.row(r);
    pts.emplace_back(model->decision(x), model->predict_proba_row(x)[kContent]);
  }
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GE(pts[i].second, pts[i - 1].second - 1e-15);
}

}  // namespace
}  // namespace lifesat
