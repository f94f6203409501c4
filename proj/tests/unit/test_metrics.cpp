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

#include <cmath>

#include "../support/fixtures.hpp"
#include "lifesat/metrics.hpp"

namespace lifesat {
namespace {

TEST(Metrics, ConfusionCountArithmetic) {
  const ConfusionMatrix cm{3068, 124, 104, 99};
  const Scores s = scores(cm);
  EXPECT_EQ(cm.total(), 3395u);
  EXPECT_EQ(s.accuracy, 3167.0 / 3395.0);
  EXPECT_NEAR(s.positive.precision, 0.9612, 5e-5);
  EXPECT_NEAR(s.positive.recall, 0.9672, 5e-5);
  EXPECT_NEAR(s.positive.f1, 0.9642, 5e-5);
}

TEST(Metrics, TwoFormF1Agrees) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const ConfusionMatrix cm{1 + rng.below(1000), rng.below(300), rng.below(300), rng.below(1000)};
    const Scores s = scores(cm);
    const double count_form = 2.0 * cm.tp / (2.0 * cm.tp + cm.fp + cm.fn);
    EXPECT_NEAR(harmonic_f1(s.positive.precision, s.positive.recall), count_form, 1e-12);
    EXPECT_NEAR(s.positive.f1, count_form, 1e-12);
  }
}

TEST(Metrics, ConfusionFromLabelsAndMacro) {
  const std::vector<int> t{1, 1, 1, 0, 0, 1, 0, 1};
  const std::vector<int> p{1, 0, 1, 0, 1, 1, 0, 1};
  const auto cm = confusion(t, p);
  EXPECT_EQ(cm, (ConfusionMatrix{4, 1, 1, 2}));
  const auto m = macro_scores(t, p);
  const double f1_pos = 2.0 * 4 / (8 + 2);
  const double f1_neg = 2.0 * 2 / (4 + 2);
  EXPECT_NEAR(m.f1, (f1_pos + f1_neg) / 2, 1e-15);
}

TEST(Metrics, SafeRatioOnEmptyDenominator) {
  EXPECT_EQ(safe_ratio(0, 0), 0.0);
  const Scores s = scores(ConfusionMatrix{0, 0, 5, 5});
  EXPECT_EQ(s.positive.precision, 0.0);
  EXPECT_EQ(s.positive.f1, 0.0);
}

TEST(Metrics, TrapezoidAucEqualsMannWhitney) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> y(200);
    std::vector<double> s(200);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = rng.uniform() < 0.3 ? 0 : 1;
      // Coarse grid so ties occur.
      s[i] = std::round((rng.uniform() + 0.3 * y[i]) * 20.0) / 20.0;
    }
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[i] != 1 || y[j] != 0) continue;
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
    const RocCurve roc = roc_auc(y, s);
    EXPECT_NEAR(roc.auc, wins / pairs, 1e-9);
    EXPECT_EQ(roc.points.front(), std::make_pair(0.0, 0.0));
    EXPECT_EQ(roc.points.back(), std::make_pair(1.0, 1.0));
  }
}

// Two-sided p from Simpson integration of the Student-t density on [0, |t|].
double numeric_t_pvalue(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double x) { return c * std::pow(1.0 + x * x / df, -(df + 1) / 2); };
  const int n = 200000;
  const double h = std::abs(t) / n;
  double acc = f(0) + f(std::abs(t));
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 1.0 - 2.0 * acc * h / 3.0;
}

TEST(Metrics, PairedTTestMatchesNumericOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 3 + trial * 2;
    std::vector<double> a(n), b(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.9 + 0.02 * rng.normal();
      b[i] = a[i] - 0.01 + 0.015 * rng.normal();
      d[i] = a[i] - b[i];
    }
    double mean = 0;
    for (double v : d) mean += v / n;
    double ss = 0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double t = mean / std::sqrt(ss / (n - 1) / n);
    const auto r = paired_ttest(a, b);
    EXPECT_EQ(r.df, n - 1);
    EXPECT_NEAR(r.t, t, 1e-9);
    EXPECT_NEAR(r.p, numeric_t_pvalue(t, n - 1.0), 5e-5) << "n " << n;
  }
}

TEST(Metrics, TTestRejectsDegenerateInput) {
  const std::vector<double> a{1, 2, 3}, b{0, 1, 2};
  EXPECT_THROW(paired_ttest(a, b), DegenerateInput);
  EXPECT_THROW(paired_ttest(std::vector<double>{1, 2}, std::vector<double>{1}), DimensionMismatch);
}

TEST(Metrics, MeanStdSampleFormAndFormatting) {
  const std::vector<double> v{93.7, 93.8, 93.9};
  const auto ms = mean_std(v);
  EXPECT_NEAR(ms.mean, 93.8, 1e-12);
  EXPECT_NEAR(ms.std, 0.1, 1e-12);
  EXPECT_EQ(format_mean_std(ms), "93.80 ± 0.10");
  EXPECT_EQ(mean_std(std::vector<double>{5.0}).std, 0.0);
}

TEST(Metrics, EvaluateMatchesDirectCounts) {
  const auto ds = fixtures::planted(300, 2, 1, 0.5, 2);
  const fixtures::StepModel m(0, 2.0, ds.cols());
  const auto report = evaluate("step", m, ds.values, *ds.labels);
  const auto cm = confusion(*ds.labels, m.predict(ds.values));
  EXPECT_EQ(report.confusion, cm);
  EXPECT_EQ(report.accuracy, static_cast<double>(cm.tp + cm.tn) / cm.total());
}

TEST(Metrics, ErrorBreakdownCountsMistakes) {
  const auto ds = fixtures::planted(100, 2, 0, 0.5, 3);
  std::vector<std::pair<std::string, ModelPtr>> models{{"all_content", std::make_shared<fixtures::ConstantModel>(0.9, 2)}};
  const auto rows = error_breakdown(models, ds.values, *ds.labels);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].false_positives, class_counts(*ds.labels)[kDiscontent]);
  EXPECT_EQ(rows[0].false_negatives, 0u);
}

}  // namespace
}  // namespace lifesat
