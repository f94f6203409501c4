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

#include "lifesat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace lifesat {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch("label vectors differ in length");
  if (a == 0) throw InvalidArgument("no rows to score");
}

double metric_value(const EvaluationReport& r, const std::string& metric) {
  if (metric == "Accuracy") return r.accuracy;
  if (metric == "F1") return r.macro.f1;
  if (metric == "Precision") return r.macro.precision;
  if (metric == "Recall") return r.macro.recall;
  return r.roc.auc;
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int positive) {
  check_lengths(y_true.size(), y_pred.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == positive;
    const bool predicted = y_pred[i] == positive;
    if (actual && predicted) ++cm.tp;
    else if (!actual && predicted) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

double safe_ratio(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

double harmonic_f1(double precision, double recall) {
  return safe_ratio(2.0 * precision * recall, precision + recall);
}

Scores scores(const ConfusionMatrix& cm) {
  auto one_side = [](const ConfusionMatrix& c) {
    ClassScores s;
    s.precision = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    s.recall = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    s.f1 = safe_ratio(2.0 * static_cast<double>(c.tp), static_cast<double>(2 * c.tp + c.fp + c.fn));
    return s;
  };
  Scores out;
  out.accuracy = safe_ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
  out.positive = one_side(cm);
  out.negative = one_side(cm.swapped());
  return out;
}

MacroScores macro_scores(std::span<const int> y_true, std::span<const int> y_pred) {
  const Scores s = scores(confusion(y_true, y_pred, kContent));
  return {(s.positive.precision + s.negative.precision) / 2.0, (s.positive.recall + s.negative.recall) / 2.0,
          (s.positive.f1 + s.negative.f1) / 2.0};
}

RocCurve roc_auc(std::span<const int> y_true, std::span<const double> scores) {
  check_lengths(y_true.size(), scores.size());
  double P = 0.0;
  for (int v : y_true) P += v == 1;
  const double N = static_cast<double>(y_true.size()) - P;
  if (P == 0.0 || N == 0.0) throw DegenerateInput("ROC needs both classes present");
  std::vector<std::size_t> order(y_true.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RocCurve roc;
  roc.points.emplace_back(0.0, 0.0);
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (y_true[order[i]] == 1 ? tp : fp) += 1.0;
      ++i;
    }
    const auto [x0, y0] = roc.points.back();
    const double x1 = fp / N;
    const double y1 = tp / P;
    roc.auc += (x1 - x0) * (y0 + y1) / 2.0;
    roc.points.emplace_back(x1, y1);
  }
  return roc;
}

nlohmann::json EvaluationReport::to_json(bool with_curve) const {
  auto cls = [](const ClassScores& s) { return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}}; };
  nlohmann::json out{{"model", model},
                     {"confusion", {{"tp", confusion.tp}, {"fp", confusion.fp}, {"fn", confusion.fn}, {"tn", confusion.tn}}},
                     {"accuracy", accuracy},
                     {"per_class", {{class_name(kDiscontent), cls(per_class[0])}, {class_name(kContent), cls(per_class[1])}}},
                     {"macro", {{"precision", macro.precision}, {"recall", macro.recall}, {"f1", macro.f1}}},
                     {"auc", roc.auc}};
  if (with_curve) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : roc.points) pts.push_back({x, y});
    out["roc"] = pts;
  }
  return out;
}

EvaluationReport evaluate(const std::string& model, std::span<const int> y_true, std::span<const ProbaPair> proba) {
  check_lengths(y_true.size(), proba.size());
  std::vector<int> pred(proba.size());
  std::vector<double> score(proba.size());
  for (std::size_t i = 0; i < proba.size(); ++i) {
    pred[i] = proba[i][1] >= proba[i][0] ? kContent : kDiscontent;
    score[i] = proba[i][1];
  }
  EvaluationReport r;
  r.model = model;
  r.confusion = confusion(y_true, pred, kContent);
  const Scores s = scores(r.confusion);
  r.accuracy = s.accuracy;
  r.per_class[kContent] = s.positive;
  r.per_class[kDiscontent] = s.negative;
  r.macro = {(s.positive.precision + s.negative.precision) / 2.0, (s.positive.recall + s.negative.recall) / 2.0,
             (s.positive.f1 + s.negative.f1) / 2.0};
  r.roc = roc_auc(y_true, score);
  return r;
}

EvaluationReport evaluate(const std::string& model, const Classifier& clf, const Matrix& X, std::span<const int> y) {
  const auto proba = clf.predict_proba(X);
  return evaluate(model, y, proba);
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("paired t-test needs equal-length samples");
  const std::size_t n = a.size();
  if (n < 2) throw InvalidArgument("paired t-test needs at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const MeanStd ms = mean_std(d);
  if (!(ms.std > 0.0)) throw DegenerateInput("paired differences have zero variance");
  TTestResult r;
  r.df = n - 1;
  r.t = ms.mean / (ms.std / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(r.df));
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

std::vector<ErrorRow> error_breakdown(const std::vector<std::pair<std::string, ModelPtr>>& models, const Matrix& X,
                                      std::span<const int> y) {
  std::vector<ErrorRow> out;
  for (const auto& [name, model] : models) {
    const auto pred = model->predict(X);
    const auto cm = confusion(y, pred, kContent);
    out.push_back({name, cm.fp, cm.fn});
  }
  return out;
}

std::string error_breakdown_csv(const std::vector<ErrorRow>& rows) {
  std::string out = "model,false_positives,false_negatives\n";
  for (const auto& r : rows) {
    out += r.model + "," + std::to_string(r.false_positives) + "," + std::to_string(r.false_negatives) + "\n";
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of an empty sample");
  const double n = static_cast<double>(values.size());
  MeanStd out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

std::string format_mean_std(const MeanStd& ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", ms.mean, ms.std);
  return buf;
}

const std::vector<std::string>& report_metrics() {
  static const std::vector<std::string> names{"Accuracy", "F1", "Precision", "Recall", "ROC"};
  return names;
}

std::vector<SummaryRow> mean_std_report(const std::vector<EvaluationReport>& runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const EvaluationReport*>> by_model;
  for (const auto& r : runs) {
    if (!by_model.count(r.model)) order.push_back(r.model);
    by_model[r.model].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& name : order) {
    SummaryRow row;
    row.model = name;
    row.runs = by_model[name].size();
    for (const auto& metric : report_metrics()) {
      std::vector<double> values;
      for (const auto* r : by_model[name]) values.push_back(100.0 * metric_value(*r, metric));
      row.metrics[metric] = mean_std(values);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "model";
  for (const auto& m : report_metrics()) out += "," + m;
  out += ",runs\n";
  for (const auto& r : rows) {
    out += r.model;
    for (const auto& m : report_metrics()) out += "," + format_mean_std(r.metrics.at(m));
    out += "," + std::to_string(r.runs) + "\n";
  }
  return out;
}

nlohmann::json summary_json(const std::vector<SummaryRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& m : report_metrics()) {
      const auto& ms = r.metrics.at(m);
      metrics[m] = {{"mean", ms.mean}, {"std", ms.std}, {"text", format_mean_std(ms)}};
    }
    out.push_back({{"model", r.model}, {"runs", r.runs}, {"metrics", metrics}});
  }
  return out;
}

}  // namespace lifesat
