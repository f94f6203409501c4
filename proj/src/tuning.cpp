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

#include "lifesat/tuning.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "lifesat/metrics.hpp"

namespace lifesat {

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kMacroF1: return "macro_f1";
    case Metric::kAuc: return "auc";
  }
  return "accuracy";
}

Metric metric_from_string(const std::string& text) {
  for (auto m : {Metric::kAccuracy, Metric::kMacroF1, Metric::kAuc}) {
    if (to_string(m) == text) return m;
  }
  throw InvalidArgument("unknown metric '" + text + "'");
}

double score_model(const Classifier& model, const Matrix& X, std::span<const int> y, Metric metric) {
  const auto proba = model.predict_proba(X);
  std::vector<int> pred(proba.size());
  for (std::size_t i = 0; i < proba.size(); ++i) pred[i] = proba[i][1] >= proba[i][0] ? kContent : kDiscontent;
  switch (metric) {
    case Metric::kAccuracy: return scores(confusion(y, pred)).accuracy;
    case Metric::kMacroF1: return macro_scores(y, pred).f1;
    case Metric::kAuc: {
      std::vector<double> s(proba.size());
      for (std::size_t i = 0; i < proba.size(); ++i) s[i] = proba[i][1];
      return roc_auc(y, s).auc;
    }
  }
  return 0.0;
}

std::vector<std::vector<std::size_t>> make_folds(std::span<const int> y, std::size_t k, std::uint64_t seed,
                                                 bool stratified) {
  if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (y.size() < k) throw InvalidArgument("fewer rows than folds");
  std::vector<std::vector<std::size_t>> folds(k);
  std::vector<std::vector<std::size_t>> groups(stratified ? 2 : 1);
  for (std::size_t i = 0; i < y.size(); ++i) groups[stratified ? static_cast<std::size_t>(y[i] == 1) : 0].push_back(i);
  std::size_t next = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Rng rng(derive_seed(seed, g));
    rng.shuffle(groups[g]);
    for (std::size_t i : groups[g]) {
      folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult cross_validate(const ModelSpec& spec, const Matrix& X, std::span<const int> y, std::size_t k, Metric metric,
                        std::uint64_t seed, bool stratified) {
  if (X.rows() != y.size()) throw DimensionMismatch("cross-validation: label count differs from rows");
  validate(spec);
  const auto folds = make_folds(y, k, seed, stratified);
  CvResult out;
  out.fold_scores.assign(k, 0.0);
  parallel_for(k, [&](std::size_t f) {
    std::vector<char> is_test(X.rows(), 0);
    for (std::size_t i : folds[f]) is_test[i] = 1;
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < X.rows(); ++i) {
      if (!is_test[i]) train.push_back(i);
    }
    std::vector<int> ytr;
    std::vector<int> yte;
    for (std::size_t i : train) ytr.push_back(y[i]);
    for (std::size_t i : folds[f]) yte.push_back(y[i]);
    if (std::all_of(yte.begin(), yte.end(), [&](int v) { return v == yte.front(); })) {
      spdlog::warn("cross-validation fold {} holds a single class", f);
    }
    const auto model = fit_model(spec, X.select_rows(train), ytr, {}, derive_seed(seed, 1000 + f));
    out.fold_scores[f] = score_model(*model, X.select_rows(folds[f]), yte, metric);
  });
  const MeanStd ms = mean_std(out.fold_scores);
  out.mean = ms.mean;
  out.std = ms.std;
  return out;
}

ParamSpace ParamSpace::from_json(const nlohmann::json& doc) {
  ParamSpace space;
  const auto& params = doc.at("params");
  if (!params.is_object() || params.empty()) throw InvalidArgument("param space needs at least one parameter");
  for (const auto& [name, v] : params.items()) {
    ParamRange r;
    r.name = name;
    if (v.is_array()) {
      if (v.empty()) throw InvalidArgument("parameter '" + name + "' has an empty value list");
      for (const auto& x : v) r.values.push_back(x);
    } else if (v.is_object()) {
      r.is_range = true;
      r.low = v.at("low").get<double>();
      r.high = v.at("high").get<double>();
      r.log_scale = v.value("log", false);
      r.integer = v.value("integer", false);
      if (!(r.low <= r.high)) throw InvalidArgument("parameter '" + name + "' has an empty range");
      if (r.log_scale && !(r.low > 0.0)) throw InvalidArgument("log range for '" + name + "' must be positive");
    } else {
      throw InvalidArgument("parameter '" + name + "' must be a list or a range");
    }
    space.params.push_back(std::move(r));
  }
  space.n_iter = doc.value("n_iter", std::size_t{10});
  space.seed = doc.value("seed", std::uint64_t{0});
  return space;
}

nlohmann::json ParamSpace::to_json() const {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& r : this->params) {
    if (r.is_range) {
      params[r.name] = {{"low", r.low}, {"high", r.high}, {"log", r.log_scale}, {"integer", r.integer}};
    } else {
      params[r.name] = r.values;
    }
  }
  return {{"params", params}, {"n_iter", n_iter}, {"seed", seed}};
}

std::size_t ParamSpace::grid_size() const {
  std::size_t n = 1;
  for (const auto& r : params) {
    if (r.is_range) throw InvalidArgument("grid search needs value lists; '" + r.name + "' is a range");
    n *= r.values.size();
  }
  return params.empty() ? 0 : n;
}

std::vector<nlohmann::json> grid_candidates(const ParamSpace& space) {
  const std::size_t total = space.grid_size();
  if (total == 0) throw InvalidArgument("empty parameter grid");
  std::vector<nlohmann::json> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    nlohmann::json cand = nlohmann::json::object();
    std::size_t rest = idx;
    for (std::size_t p = space.params.size(); p-- > 0;) {
      const auto& r = space.params[p];
      cand[r.name] = r.values[rest % r.values.size()];
      rest /= r.values.size();
    }
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<nlohmann::json> random_candidates(const ParamSpace& space) {
  if (space.n_iter < 1) throw InvalidArgument("n_iter must be at least 1");
  if (space.params.empty()) throw InvalidArgument("empty parameter space");
  Rng rng(space.seed);
  std::vector<nlohmann::json> out;
  for (std::size_t it = 0; it < space.n_iter; ++it) {
    nlohmann::json cand = nlohmann::json::object();
    for (const auto& r : space.params) {
      if (!r.is_range) {
        cand[r.name] = r.values[rng.below(r.values.size())];
      } else if (r.integer) {
        const auto lo = static_cast<long long>(std::ceil(r.low));
        const auto hi = static_cast<long long>(std::floor(r.high));
        cand[r.name] = lo + static_cast<long long>(rng.below(static_cast<std::size_t>(hi - lo + 1)));
      } else if (r.log_scale) {
        cand[r.name] = std::exp(std::log(r.low) + rng.uniform() * (std::log(r.high) - std::log(r.low)));
      } else {
        cand[r.name] = r.low + rng.uniform() * (r.high - r.low);
      }
    }
    out.push_back(std::move(cand));
  }
  return out;
}

ModelSpec with_params(const ModelSpec& base, const nlohmann::json& params) {
  ModelSpec spec = base;
  for (const auto& [k, v] : params.items()) spec.params[k] = v;
  return spec;
}

namespace {

SearchResult run_search(const std::vector<nlohmann::json>& candidates, const ModelSpec& base, const Matrix& X,
                        std::span<const int> y, std::size_t k, Metric metric, std::uint64_t seed) {
  SearchResult result;
  result.table.resize(candidates.size());
  for (const auto& c : candidates) validate(with_params(base, c));
  parallel_for(candidates.size(), [&](std::size_t i) {
    result.table[i].params = candidates[i];
    result.table[i].cv = cross_validate(with_params(base, candidates[i]), X, y, k, metric, seed);
  });
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    if (i == 0 || result.table[i].cv.mean > result.best_score) {
      result.best_score = result.table[i].cv.mean;
      result.best_index = i;
    }
  }
  result.best_params = result.table[result.best_index].params;
  return result;
}

}  // namespace

nlohmann::json SearchResult::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : table) {
    rows.push_back({{"params", c.params}, {"mean", c.cv.mean}, {"std", c.cv.std}, {"folds", c.cv.fold_scores}});
  }
  return {{"best_params", best_params}, {"best_score", best_score}, {"best_index", best_index}, {"candidates", rows}};
}

SearchResult grid_search(const ParamSpace& space, const ModelSpec& base, const Matrix& X, std::span<const int> y,
                         std::size_t k, Metric metric, std::uint64_t seed) {
  return run_search(grid_candidates(space), base, X, y, k, metric, seed);
}

SearchResult random_search(const ParamSpace& space, const ModelSpec& base, const Matrix& X, std::span<const int> y,
                           std::size_t k, Metric metric, std::uint64_t seed) {
  return run_search(random_candidates(space), base, X, y, k, metric, seed);
}

}  // namespace lifesat
