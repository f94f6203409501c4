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

#ifndef LIFESAT_EXPLAIN_HPP_
#define LIFESAT_EXPLAIN_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lifesat/learners.hpp"
#include "lifesat/table.hpp"

namespace lifesat {

struct FeatureBins {
  std::string code;
  // Distinct quartile cut points, ascending. Empty for a constant feature.
  std::vector<double> boundaries;
  double constant = 0.0;
  // Training values used to resample this feature (at most 1000).
  std::vector<double> samples;

  std::size_t bin_of(double v) const;
  std::string rule(std::size_t bin) const;
};

struct DiscretizerStats {
  std::vector<FeatureBins> features;

  std::size_t size() const { return features.size(); }
  nlohmann::json to_json() const;
  static DiscretizerStats from_json(const nlohmann::json& doc);
};

// Linear-interpolation quantile of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);

DiscretizerStats fit_discretizer(const Dataset& train);

struct ExplainOptions {
  std::size_t n_samples = 5000;
  // Defaults to 0.75 * sqrt(d).
  std::optional<double> kernel_width;
  double ridge_lambda = 1.0;
  std::uint64_t seed = 0;
  int explained_class = kContent;
};

struct Contribution {
  std::string code;
  std::string rule;
  double weight = 0.0;
};

// Perturbation set kept for fidelity scoring.
struct Perturbations {
  Matrix samples;
  // 1 where the sample shares the instance's bin.
  Matrix binary;
  std::vector<double> kernel;
  std::vector<double> target;
};

struct Explanation {
  ProbaPair class_probs{};
  int explained_class = kContent;
  // Sorted by |weight| descending.
  std::vector<Contribution> contributions;
  double intercept = 0.0;
  // Surrogate value at the instance itself: intercept + sum of weights.
  double local_prediction = 0.0;
  double fidelity = 0.0;
  double kernel_width = 0.0;
  std::size_t n_samples = 0;

  // Surrogate output for a binary row in feature order.
  double surrogate(std::span<const double> binary, const std::vector<std::string>& codes) const;
  nlohmann::json to_json(std::size_t top_k = 0) const;
};

Explanation explain_instance(const Classifier& model, std::span<const double> instance,
                             const DiscretizerStats& stats, const ExplainOptions& options = {},
                             Perturbations* kept = nullptr);

// Weighted R^2 of the surrogate against the model on the perturbation set.
// A constant target with zero residual scores 1.
double fidelity_score(const Explanation& explanation, const DiscretizerStats& stats, const Perturbations& p);

}  // namespace lifesat

#endif  // LIFESAT_EXPLAIN_HPP_
