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

#ifndef LIFESAT_METRICS_HPP_
#define LIFESAT_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lifesat/learners.hpp"
#include "lifesat/table.hpp"

namespace lifesat {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  // Same counts seen from the other class.
  ConfusionMatrix swapped() const { return {tn, fn, fp, tp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int positive = kContent);

// a / b with 0/0 (and x/0) taken as 0.
double safe_ratio(double a, double b);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Scores {
  double accuracy = 0.0;
  ClassScores positive;
  ClassScores negative;
};

Scores scores(const ConfusionMatrix& cm);

// 2PR / (P + R), 0 when both are 0.
double harmonic_f1(double precision, double recall);

struct MacroScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

MacroScores macro_scores(std::span<const int> y_true, std::span<const int> y_pred);

struct RocCurve {
  // (FPR, TPR) from (0,0) to (1,1).
  std::vector<std::pair<double, double>> points;
  double auc = 0.0;
};

// `scores` rank rows toward class 1; equal scores form one threshold step.
RocCurve roc_auc(std::span<const int> y_true, std::span<const double> scores);

struct EvaluationReport {
  std::string model;
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  // Indexed by class (0 = Discontent, 1 = Content).
  ClassScores per_class[2];
  MacroScores macro;
  RocCurve roc;

  nlohmann::json to_json(bool with_curve = true) const;
};

EvaluationReport evaluate(const std::string& model, std::span<const int> y_true, std::span<const ProbaPair> proba);
EvaluationReport evaluate(const std::string& model, const Classifier& clf, const Matrix& X, std::span<const int> y);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

// Two-sided paired t-test on a - b.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

struct ErrorRow {
  std::string model;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

std::vector<ErrorRow> error_breakdown(const std::vector<std::pair<std::string, ModelPtr>>& models, const Matrix& X,
                                      std::span<const int> y);
std::string error_breakdown_csv(const std::vector<ErrorRow>& rows);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Sample standard deviation; a single value has std 0.
MeanStd mean_std(std::span<const double> values);
// "93.80 ± 0.10"
std::string format_mean_std(const MeanStd& ms);

// Column order of the summary table.
const std::vector<std::string>& report_metrics();

struct SummaryRow {
  std::string model;
  // Metric name -> mean/std in percent.
  std::map<std::string, MeanStd> metrics;
  std::size_t runs = 0;
};

// One row per model, in first-seen order, aggregating runs across seeds.
std::vector<SummaryRow> mean_std_report(const std::vector<EvaluationReport>& runs);
std::string summary_csv(const std::vector<SummaryRow>& rows);
nlohmann::json summary_json(const std::vector<SummaryRow>& rows);

}  // namespace lifesat

#endif  // LIFESAT_METRICS_HPP_
