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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "../support/fixtures.hpp"
#include "lifesat/csv.hpp"
#include "lifesat/explain.hpp"
#include "lifesat/metrics.hpp"
#include "lifesat/pipeline.hpp"
#include "lifesat/preprocess.hpp"
#include "lifesat/questionnaire.hpp"
#include "lifesat/resample.hpp"
#include "lifesat/selection.hpp"
#include "lifesat/textgen.hpp"

namespace lifesat::acceptance {
namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

// Collects failed sub-checks; the first few end up in the report line.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_.empty()) return {Verdict::kPass, summary + " (" + std::to_string(count_) + " checks)"};
    std::string d = std::to_string(failures_.size()) + "/" + std::to_string(count_) + " failed:";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, failures_.size()); ++i) d += " [" + failures_[i] + "]";
    return {Verdict::kFail, d};
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
};

// ------------------------------------------------------------ leakage

Outcome leakage_and_determinism() {
  Checks c;
  const auto config = PipelineConfig::load(fixtures::config_path("synthetic.json"));
  fixtures::TempDir a("acc_a"), b("acc_b");
  const auto first = run_training(config);
  write_training_outputs(first, a.path().string());
  write_training_outputs(run_training(config), b.path().string());
  for (const char* f : {"report.json", "report.csv", "error_analysis.csv", "audit.json", "model.artifact"}) {
    c.expect(read_file(a.file(f)) == read_file(b.file(f)), std::string(f) + " differs between runs");
  }
  const auto [schema, full] = load_data(config);
  for (const auto& run : first.runs) {
    const auto split = shuffle_split(full, config.train_fraction, run.seed);
    const std::set<std::uint64_t> train(split.train.row_ids.begin(), split.train.row_ids.end());
    const std::set<std::uint64_t> test(split.test.row_ids.begin(), split.test.row_ids.end());
    std::string joined;
    for (auto id : test) {
      c.expect(!train.count(id), "test row in training split");
      joined += std::to_string(id) + "\n";
    }
    c.expect(run.audit["test_id_sha256"] == sha256_hex(joined), "audit hash does not match replayed split");
    for (const auto& st : run.audit["stages"]) c.expect(st["test_overlap"] == 0, "stage overlaps test rows");
    c.expect(run.audit["stages"].size() >= 4, "audit misses stages");
  }
  // The audit must refuse an overlapping input.
  const auto split = shuffle_split(full, config.train_fraction, 21);
  LeakageAudit audit(split.test);
  bool thrown = false;
  try {
    audit.check("probe", full);
  } catch (const LeakageError&) {
    thrown = true;
  }
  c.expect(thrown, "audit accepted a dataset containing test rows");
  return c.outcome("byte-identical reruns, disjoint test rows");
}

// ---------------------------------------------------------- resampling

Dataset two_class(std::size_t major, std::size_t minor, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(major + minor, d);
  std::vector<int> y(major + minor);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    y[r] = r < major ? kContent : kDiscontent;
    for (std::size_t j = 0; j < d; ++j) m(r, j) = rng.normal() + (y[r] == kContent ? 0.0 : 2.0);
  }
  return make_dataset(numeric_columns(d), std::move(m), std::move(y));
}

Outcome resampling() {
  Checks c;
  Rng rng(99);
  for (int t = 0; t < 50; ++t) {
    const std::size_t minor = 2 + rng.below(80);
    const std::size_t major = minor + 1 + rng.below(500);
    ResamplePlan plan;
    plan.seed = static_cast<std::uint64_t>(t);
    plan.smote_target_ratio = 0.05 + 0.95 * rng.uniform();
    const auto out = dual_resample(two_class(major, minor, 1 + rng.below(6), t), plan);
    const auto n = class_counts(*out.labels);
    c.expect(n[0] == n[1], "fixture " + std::to_string(t) + " unbalanced");
  }
  const Dataset ds = two_class(400, 30, 4, 1);
  std::vector<std::pair<std::size_t, std::size_t>> parents;
  ResamplePlan plan;
  plan.seed = 4;
  const Dataset over = smote_oversample(ds, plan, &parents);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto [p, q] = parents[i];
    c.expect((*ds.labels)[p] == kDiscontent && (*ds.labels)[q] == kDiscontent, "parent outside minority");
    for (std::size_t j = 0; j < ds.cols(); ++j) {
      const double v = over.values(ds.rows() + i, j);
      const double lo = std::min(ds.values(p, j), ds.values(q, j)), hi = std::max(ds.values(p, j), ds.values(q, j));
      c.expect(v >= lo - 1e-12 && v <= hi + 1e-12, "synthetic value off its parent segment");
    }
  }
  plan.smote_target_ratio = 0.40;
  const auto n = class_counts(*dual_resample(two_class(100, 10, 3, 2), plan).labels);
  c.expect(n[kDiscontent] == 40 && n[kContent] == 40, "100/10 did not give 40/40");
  return c.outcome("50 fixtures balanced, betweenness holds, 100/10 -> 40/40");
}

// ------------------------------------------------------- preprocessing

Dataset columns_with_gaps(const std::vector<std::vector<double>>& cols) {
  const std::size_t n = cols.front().size(), d = cols.size();
  Matrix m(n, d);
  std::vector<std::uint8_t> miss(n * d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t r = 0; r < n; ++r) {
      if (std::isnan(cols[j][r])) {
        miss[r * d + j] = 1;
      } else {
        m(r, j) = cols[j][r];
      }
    }
  }
  Dataset ds = make_dataset(numeric_columns(d), std::move(m), std::vector<int>(n, kContent));
  ds.missing = std::move(miss);
  return ds;
}

std::vector<double> gapped(std::size_t n, std::size_t gaps) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i < gaps ? std::nan("") : static_cast<double>(i % 4);
  return v;
}

Outcome preprocessing() {
  Checks c;
  {
    const auto [kept, dropped] = drop_high_null(columns_with_gaps({gapped(10, 2), gapped(10, 3)}), 0.20);
    c.expect(dropped == std::vector<std::string>{"x1"}, "20% column dropped or 30% kept");
    const auto [kept2, dropped2] = drop_high_null(columns_with_gaps({gapped(1000, 200), gapped(1000, 201)}), 0.20);
    c.expect(dropped2 == std::vector<std::string>{"x1"}, "20.0%/20.1% boundary wrong");
  }
  {
    std::vector<double> col(10, 0.0);
    col[9] = 10.0;
    const Dataset ds = columns_with_gaps({col});
    const Dataset out = clamp_outliers(ds, fit_outlier_stats(ds));
    bool zeros = true;
    for (std::size_t r = 0; r < 10; ++r) zeros = zeros && out.values(r, 0) == 0.0;
    c.expect(zeros, "clamp fixture not replaced by the median 0");
  }
  {
    Rng rng(5);
    std::vector<double> a(500), b(500), truth(500);
    for (std::size_t i = 0; i < 500; ++i) {
      a[i] = rng.uniform() * 8.0;
      truth[i] = 3.0 - 1.5 * a[i];
      b[i] = i % 7 == 0 ? std::nan("") : truth[i];
    }
    ImputeOptions opts;
    opts.round_ordinal = false;
    const auto [out, model] = iterative_impute(columns_with_gaps({a, b}), opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < 500; i += 7) worst = std::max(worst, std::abs(out.values(i, 1) - truth[i]));
    c.expect(worst <= 1e-2, "imputer error " + format_double(worst));
  }
  {
    const Dataset ds = fixtures::planted(800, 4, 6, 0.3, 3, 0.1);
    const auto split = shuffle_split(ds, 0.8, 1);
    const auto [pre, train] = FittedPreprocessor::fit(split.train);
    c.expect(!train.has_missing(), "gaps left in the processed training set");
    c.expect(!pre.apply(split.test).has_missing(), "gaps left in the processed held-out set");
  }
  return c.outcome("strict 20% drop, clamp fixture, imputer, no gaps after chain");
}

// ------------------------------------------------------------ learners

ModelSpec kind_spec(const std::string& kind) {
  if (kind != "voting") return {kind, kind, nlohmann::json::object()};
  nlohmann::json members = nlohmann::json::array();
  for (const char* k : {"random_forest", "gradient_boosting", "logistic_regression"}) members.push_back({{"kind", k}});
  return {"voting", "voting", {{"members", members}}};
}

Outcome learners() {
  Checks c;
  for (const auto& kind : model_kinds()) {
    for (std::uint64_t seed : {21u, 42u, 63u, 84u, 105u}) {
      const auto s = shuffle_split(fixtures::planted(2000, 3, 5, 0.5, seed), 0.8, seed + 1);
      const auto model = fit_model(kind_spec(kind), s.train.values, *s.train.labels, {}, seed);
      const auto counts = class_counts(*s.test.labels);
      const double baseline = static_cast<double>(std::max(counts[0], counts[1])) / s.test.rows();
      const double acc = evaluate(kind, *model, s.test.values, *s.test.labels).accuracy;
      c.expect(acc >= baseline + 0.15, kind + " seed " + std::to_string(seed) + " accuracy " + format_double(acc));
    }
  }
  const auto s = shuffle_split(fixtures::planted(2000, 3, 5, 0.5, 1), 0.8, 2);
  {
    BoostParams p;
    p.n_estimators = 50;
    p.learning_rate = 0.2;
    p.max_depth = 3;
    const auto gb = train_gradient_boosting(s.train.values, *s.train.labels, {}, p, 1);
    double worst = 0.0;
    for (std::size_t r = 0; r < 100; ++r) {
      const auto x = s.test.values.row(r);
      for (std::size_t m = 1; m <= gb->stages().size(); ++m) {
        const double step = gb->raw_score(x, m - 1) + p.learning_rate * gb->stages()[m - 1].predict(x);
        worst = std::max(worst, std::abs(gb->raw_score(x, m) - step));
      }
    }
    c.expect(worst <= 1e-9, "additive identity off by " + format_double(worst));
  }
  {
    AdaBoostParams p;
    p.n_estimators = 100;
    const auto ada = train_adaboost(s.train.values, *s.train.labels, {}, p);
    for (std::size_t r = 0; r < s.test.rows(); ++r) {
      const auto x = s.test.values.row(r);
      double m = 0.0;
      for (std::size_t t = 0; t < ada->learners().size(); ++t) {
        m += ada->alphas()[t] * (ada->learners()[t].predict(x) >= 0.5 ? 1.0 : -1.0);
      }
      c.expect(ada->predict_row(x) == (m >= 0.0 ? kContent : kDiscontent), "AdaBoost sign identity broken");
    }
  }
  {
    const Dataset ds = fixtures::planted(250, 3, 3, 0.5, 8);
    std::vector<double> w(ds.rows(), 1.0), beta(ds.cols() + 1), grad;
    Rng rng(2);
    for (auto& b : beta) b = 0.4 * rng.normal();
    logistic_objective(ds.values, *ds.labels, w, beta, 1.0, &grad);
    for (std::size_t j = 0; j < beta.size(); ++j) {
      auto hi = beta, lo = beta;
      hi[j] += 1e-5;
      lo[j] -= 1e-5;
      const double fd = (logistic_objective(ds.values, *ds.labels, w, hi, 1.0, nullptr) -
                         logistic_objective(ds.values, *ds.labels, w, lo, 1.0, nullptr)) /
                        2e-5;
      c.expect(std::abs(fd - grad[j]) <= 1e-5 * std::max(1.0, std::abs(grad[j])), "LR gradient mismatch");
    }
  }
  {
    const auto nb = train_naive_bayes(s.train.values, *s.train.labels, {});
    for (const auto& p : nb->predict_proba(s.test.values)) c.expect(std::abs(p[0] + p[1] - 1.0) <= 1e-9, "NB sum");
  }
  return c.outcome("10 learners beat baseline+15 on 5 seeds, identities hold");
}

// ------------------------------------------------------------ selection

Matrix spectrum_data(const std::vector<double>& scales, std::size_t n, std::uint64_t seed) {
  const std::size_t d = scales.size();
  Eigen::MatrixXd base(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < d; ++j) base(r, j) = scales[j] * std::cos(2.0 * M_PI * (j + 1) * (r + 0.5) / n);
  Rng rng(seed);
  Eigen::MatrixXd g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  const Eigen::MatrixXd x = base * q.transpose();
  Matrix out(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < d; ++j) out(r, j) = x(r, j);
  return out;
}

Outcome selection() {
  Checks c;
  std::size_t hits = 0, total = 0;
  for (std::uint64_t seed : {21u, 42u, 63u, 84u, 105u}) {
    RfecvOptions opts;
    opts.estimator.params = {{"n_estimators", 40}};
    opts.k_folds = 3;
    opts.seed = seed;
    const auto r = rfecv(fixtures::planted(600, 4, 6, 0.5, seed), opts);
    for (const char* code : {"I0", "I1", "I2", "I3"}) {
      hits += std::count(r.selected_codes.begin(), r.selected_codes.end(), code);
      ++total;
    }
  }
  c.expect(hits >= 0.9 * total, "RFECV recovered " + std::to_string(hits) + "/" + std::to_string(total));

  const std::vector<std::vector<double>> spectra{{6, 3, 2, 1, 0.5}, {9, 1, 1, 1, 1, 1, 1}, {1, 2, 3, 4, 5, 6, 7, 8}};
  std::uint64_t seed = 10;
  for (const auto& scales : spectra) {
    const Matrix X = spectrum_data(scales, 240, seed++);
    std::vector<double> ev;
    for (double s : scales) ev.push_back(s * s);
    std::sort(ev.rbegin(), ev.rend());
    const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
    for (double target : {0.95, 0.90}) {
      std::size_t k = 0;
      for (double cum = 0.0; k < ev.size() && cum / sum < target - 1e-12;) cum += ev[k++];
      c.expect(fit_pca(X, target).k == k, "PCA count differs from eigenvalue oracle");
    }
  }
  const auto s = shuffle_split(fixtures::planted(1500, 3, 4, 0.5, 5), 0.8, 6);
  BoostParams depth;
  depth.n_estimators = 50;
  depth.max_depth = 1;
  BoostParams leaf = depth;
  leaf.growth = Growth::kLeafwise;
  leaf.max_depth = -1;
  leaf.num_leaves = 2;
  const auto a = train_gradient_boosting(s.train.values, *s.train.labels, {}, depth, 1);
  const auto b = train_gradient_boosting(s.train.values, *s.train.labels, {}, leaf, 1);
  c.expect(a->predict_proba(s.test.values) == b->predict_proba(s.test.values), "leafwise(2) != depthwise(1)");
  return c.outcome("RFECV recall " + std::to_string(hits) + "/" + std::to_string(total) +
                   ", PCA counts match oracle, leafwise(2) == depthwise(1)");
}

// -------------------------------------------------------------- metrics

double student_t_two_sided(double t, double df) {
  const double k = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double x) { return k * std::pow(1.0 + x * x / df, -(df + 1) / 2); };
  const int n = 200000;
  const double h = std::abs(t) / n;
  double acc = f(0) + f(std::abs(t));
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 1.0 - 2.0 * acc * h / 3.0;
}

Outcome metrics() {
  Checks c;
  Rng rng(17);
  std::vector<int> y(200);
  std::vector<double> s(200);
  for (std::size_t i = 0; i < 200; ++i) {
    y[i] = rng.uniform() < 0.35 ? 0 : 1;
    s[i] = std::round((rng.uniform() + 0.25 * y[i]) * 25.0) / 25.0;
  }
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < 200; ++i)
    for (std::size_t j = 0; j < 200; ++j)
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
  c.expect(std::abs(roc_auc(y, s).auc - wins / pairs) <= 1e-9, "AUC differs from Mann-Whitney");

  for (int i = 0; i < 200; ++i) {
    const ConfusionMatrix cm{1 + rng.below(900), rng.below(200), rng.below(200), rng.below(900)};
    const auto sc = scores(cm);
    const double direct = 2.0 * cm.tp / (2.0 * cm.tp + cm.fp + cm.fn);
    c.expect(std::abs(harmonic_f1(sc.positive.precision, sc.positive.recall) - direct) <= 1e-12, "F1 forms differ");
  }
  c.expect(scores(ConfusionMatrix{3068, 124, 104, 99}).accuracy == 3167.0 / 3395.0, "3167/3395 not exact");

  for (std::size_t n : {3u, 5u, 8u, 12u}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.93 + 0.01 * rng.normal();
      b[i] = a[i] - 0.004 + 0.008 * rng.normal();
    }
    const auto r = paired_ttest(a, b);
    c.expect(std::abs(r.p - student_t_two_sided(r.t, n - 1.0)) < 5e-5, "t-test p differs from numeric oracle");
  }
  return c.outcome("AUC == Mann-Whitney, F1 forms agree, 3167/3395 exact, t-test oracle");
}

// ---------------------------------------------------------- explanation

Outcome explanation() {
  Checks c;
  const Dataset train = fixtures::planted(800, 3, 3, 1.0, 2);
  const auto stats = fit_discretizer(train);
  const fixtures::ConstantModel constant(0.7, train.cols());
  const auto ex0 = explain_instance(constant, train.values.row(0), stats);
  for (const auto& w : ex0.contributions) c.expect(std::abs(w.weight) < 1e-3, "constant model weight " + w.code);

  const fixtures::StepModel step(1, 2.0, train.cols());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ExplainOptions opts;
    opts.seed = seed;
    const auto ex = explain_instance(step, train.values.row(seed * 11), stats, opts);
    double planted = 0.0, other = 0.0;
    for (const auto& w : ex.contributions) {
      double& slot = w.code == train.columns[1].code ? planted : other;
      slot = std::max(slot, std::abs(w.weight));
    }
    c.expect(planted >= 3.0 * other, "planted feature not dominant at seed " + std::to_string(seed));
  }

  Rng rng(3);
  Matrix two_level(500, 5);
  for (auto& v : two_level.data()) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
  const Dataset binary = make_dataset(numeric_columns(5), two_level);
  const auto bstats = fit_discretizer(binary);
  const fixtures::LinearProbModel linear(0.15, {0.25, -0.1, 0.2, 0.05, 0.3});
  for (std::size_t r = 0; r < 5; ++r) {
    ExplainOptions opts;
    opts.seed = r;
    const auto ex = explain_instance(linear, binary.values.row(r), bstats, opts);
    c.expect(ex.fidelity >= 0.99, "fidelity " + format_double(ex.fidelity));
  }

  const auto model = fit_model({"rf", "random_forest", {{"n_estimators", 30}}}, train.values, *train.labels, {}, 1);
  for (std::size_t r = 0; r < 5; ++r) {
    ExplainOptions opts;
    opts.n_samples = 500;
    const auto ex = explain_instance(*model, train.values.row(r), stats, opts);
    c.expect(ex.class_probs == model->predict_proba_row(train.values.row(r)), "class_probs differ from predict_proba");
  }
  return c.outcome("constant ~0, planted dominance x3, fidelity >= 0.99, probs exact");
}

// --------------------------------------------------------------- textgen

Outcome textgen() {
  Checks c;
  const Schema schema = Schema::load(fixtures::config_path("lifewell_schema.json"));
  const MappingTable table = MappingTable::load(fixtures::config_path("lifewell_mapping.json"));
  const auto q = build_questionnaire(schema, lifewell_codes());
  c.expect(validate_mapping(table, q).empty(), "shipped mapping has issues");
  SynthSpec spec;
  spec.n_rows = 200;
  spec.n_informative = 6;
  spec.n_noise = 0;
  spec.seed = 4;
  const Dataset ds = generate_for_schema(schema, spec);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    c.expect(split_chunks(render_sentence(ds, r, table).sentence, table).size() == 27, "sentence without 27 chunks");
  }
  fixtures::TempDir dir("acc_text");
  export_text(ds, table, dir.file("a.jsonl"));
  std::string rebuilt;
  for (const auto& rec : import_text(dir.file("a.jsonl"))) rebuilt += rec.to_json().dump() + "\n";
  c.expect(rebuilt == read_file(dir.file("a.jsonl")), "export/import not byte-exact");
  c.expect(import_text(dir.file("a.jsonl")) == render_all(ds, table), "imported records differ");

  MappingTable gap = table;
  gap.entries.pop_back();
  c.expect(!validate_mapping(gap, q).empty(), "dropped entry not reported");
  MappingTable hole = table;
  hole.entries[1].phrases.erase(hole.entries[1].phrases.begin());
  c.expect(!validate_mapping(hole, q).empty(), "uncovered value not reported");
  return c.outcome("27 chunks, byte-exact round trip, gaps caught");
}

// ---------------------------------------------------------------- SHILD

Outcome shild() {
  const char* csv = std::getenv("LIFESAT_SHILD_CSV");
  if (csv == nullptr || *csv == '\0') return {Verdict::kSkip, "set LIFESAT_SHILD_CSV to the survey CSV to run"};
  auto doc = nlohmann::json::parse(read_file(fixtures::config_path("shild.json")));
  doc["data"]["csv"] = csv;
  if (const char* schema = std::getenv("LIFESAT_SHILD_SCHEMA")) doc["data"]["schema"] = schema;
  const auto config = PipelineConfig::from_json(doc, fixtures::config_path(""));
  Checks c;
  const auto result = run_training(config);
  double features = 0.0;
  for (const auto& run : result.runs) features += run.rfecv ? run.rfecv->selected_codes.size() : 0.0;
  features /= static_cast<double>(result.runs.size());
  c.expect(std::abs(features - 27.0) <= 3.0, "RFECV kept " + format_double(features) + " features");
  const auto& best = result.runs[result.best_run];
  c.expect(best.rfecv && best.rfecv->importances.front().first == "A2", "top feature is not A2");

  const auto [schema, full] = load_data(config);
  const auto split = shuffle_split(full, config.train_fraction, config.seeds.front());
  const auto processed = FittedPreprocessor::fit(split.train, config.preprocess).second;
  const auto k95 = fit_pca(processed.values, 0.95).k, k90 = fit_pca(processed.values, 0.90).k;
  c.expect(std::abs(static_cast<double>(k95) - 24.0) <= 2.0, "PCA 0.95 kept " + std::to_string(k95));
  c.expect(std::abs(static_cast<double>(k90) - 22.0) <= 2.0, "PCA 0.90 kept " + std::to_string(k90));
  for (const auto& row : result.summary) {
    if (row.model != "Ensemble") continue;
    const double acc = row.metrics.at("Accuracy").mean, f1 = row.metrics.at("F1").mean;
    c.expect(std::abs(acc - 93.60) <= 2.0, "ensemble accuracy " + format_double(acc));
    c.expect(std::abs(f1 - 73.00) <= 3.0, "ensemble macro F1 " + format_double(f1));
  }
  return c.outcome("RFECV " + format_double(features) + " features, PCA " + std::to_string(k95) + "/" +
                   std::to_string(k90));
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace lifesat::acceptance

int main() {
  using namespace lifesat::acceptance;
  spdlog::set_level(spdlog::level::err);
  const std::vector<Criterion> criteria{
      {"leakage_and_determinism", 60, leakage_and_determinism},
      {"resampling", 60, resampling},
      {"preprocessing", 60, preprocessing},
      {"learners", 300, learners},
      {"selection", 300, selection},
      {"metrics", 60, metrics},
      {"explanation", 300, explanation},
      {"textgen", 60, textgen},
      {"shild_reproduction", 3600, shild},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {Verdict::kFail, std::string("threw: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.verdict == Verdict::kPass && secs > c.budget_seconds) {
      o = {Verdict::kFail, "took longer than " + lifesat::format_double(c.budget_seconds) + " s"};
    }
    const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    failed += o.verdict == Verdict::kFail;
    std::printf("%s %-24s %7.1fs  %s\n", tag, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
