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

#ifndef LIFESAT_TUNING_HPP_
#define LIFESAT_TUNING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lifesat/learners.hpp"

namespace lifesat {

enum class Metric { kAccuracy, kMacroF1, kAuc };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& text);

// Scores one fitted model on held-out rows.
double score_model(const Classifier& model, const Matrix& X, std::span<const int> y, Metric metric);

// Test-row indices of each fold, sorted. Stratified folds shuffle each class
// separately and deal its rows round-robin.
std::vector<std::vector<std::size_t>> make_folds(std::span<const int> y, std::size_t k, std::uint64_t seed,
                                                 bool stratified = true);

struct CvResult {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> fold_scores;
};

CvResult cross_validate(const ModelSpec& spec, const Matrix& X, std::span<const int> y, std::size_t k, Metric metric,
                        std::uint64_t seed, bool stratified = true);

// One searchable hyperparameter: either a list of values or a numeric range
// (random search only).
struct ParamRange {
  std::string name;
  std::vector<nlohmann::json> values;
  bool is_range = false;
  double low = 0.0;
  double high = 0.0;
  bool log_scale = false;
  bool integer = false;
};

struct ParamSpace {
  std::vector<ParamRange> params;
  std::size_t n_iter = 10;
  std::uint64_t seed = 0;

  // {"params": {"learning_rate": [0.05, 0.1], "max_depth": {"low": 3,
  //  "high": 10, "integer": true}}, "n_iter": 20, "seed": 0}
  static ParamSpace from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  std::size_t grid_size() const;
};

// Every combination; the last parameter varies fastest.
std::vector<nlohmann::json> grid_candidates(const ParamSpace& space);
std::vector<nlohmann::json> random_candidates(const ParamSpace& space);

struct Candidate {
  nlohmann::json params;
  CvResult cv;
};

struct SearchResult {
  nlohmann::json best_params;
  double best_score = 0.0;
  std::size_t best_index = 0;
  std::vector<Candidate> table;

  nlohmann::json to_json() const;
};

SearchResult grid_search(const ParamSpace& space, const ModelSpec& base, const Matrix& X, std::span<const int> y,
                         std::size_t k, Metric metric, std::uint64_t seed);
SearchResult random_search(const ParamSpace& space, const ModelSpec& base, const Matrix& X, std::span<const int> y,
                           std::size_t k, Metric metric, std::uint64_t seed);

// Base spec with candidate parameters laid over its own.
ModelSpec with_params(const ModelSpec& base, const nlohmann::json& params);

}  // namespace lifesat

#endif  // LIFESAT_TUNING_HPP_
