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

#ifndef LIFESAT_SELECTION_HPP_
#define LIFESAT_SELECTION_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lifesat/learners.hpp"
#include "lifesat/table.hpp"
#include "lifesat/tuning.hpp"

namespace lifesat {

// Importance-ranked feature codes of a fitted forest, highest first.
std::vector<std::pair<std::string, double>> ranked_importances(const RandomForestModel& forest,
                                                               const std::vector<std::string>& codes);

struct RfecvOptions {
  // Must be a random_forest spec; importances come from its Gini decrease.
  ModelSpec estimator{"rfecv_forest", "random_forest", {{"n_estimators", 100}}};
  std::size_t k_folds = 5;
  std::size_t step = 1;
  std::size_t min_features = 1;
  Metric metric = Metric::kAccuracy;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct RfecvResult {
  std::vector<std::string> selected_codes;
  // 1 for selected features; larger numbers were eliminated earlier.
  std::vector<std::size_t> ranking;
  // (feature count, mean CV score), from all features down.
  std::vector<std::pair<std::size_t, double>> curve;
  std::size_t folds = 0;
  // Importances of the selected features from a forest fit on them.
  std::vector<std::pair<std::string, double>> importances;

  nlohmann::json to_json() const;
};

RfecvResult rfecv(const Dataset& ds, const RfecvOptions& options);

struct PcaModel {
  std::vector<std::string> input_codes;
  Eigen::VectorXd mean;
  // Columns are principal directions, strongest first.
  Eigen::MatrixXd components;
  // Explained-variance ratio of every direction, descending.
  std::vector<double> explained_ratio;
  std::size_t k = 0;
  double target = 1.0;

  Matrix transform(const Matrix& X) const;
  // Reconstruction from the first `k` scores.
  Matrix inverse_transform(const Matrix& scores) const;

  nlohmann::json to_json() const;
  static PcaModel from_json(const nlohmann::json& doc);
};

// Smallest k whose cumulative ratio reaches `target`.
PcaModel fit_pca(const Matrix& X, double target, std::vector<std::string> codes = {});

// Projected dataset has columns PC1..PCk; labels and row ids carry over.
std::pair<PcaModel, Dataset> pca_reduce(const Dataset& ds, double target);

Dataset pca_apply(const PcaModel& model, const Dataset& ds);

}  // namespace lifesat

#endif  // LIFESAT_SELECTION_HPP_
