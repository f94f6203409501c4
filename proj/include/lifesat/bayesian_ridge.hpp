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

#ifndef LIFESAT_BAYESIAN_RIDGE_HPP_
#define LIFESAT_BAYESIAN_RIDGE_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lifesat/common.hpp"

namespace lifesat {

// Linear regression with a Gaussian weight prior. alpha is the noise
// precision, lambda the weight precision; both are re-estimated by evidence
// maximization.
struct RidgeFit {
  std::vector<double> weights;
  double intercept = 0.0;
  double alpha = 1e-6;
  double lambda = 1e-6;
  int iterations = 0;

  double predict(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static RidgeFit from_json(const nlohmann::json& doc);
};

struct BayesianRidgeOptions {
  int max_iterations = 300;
  double tolerance = 1e-4;
  double alpha_init = 1e-6;
  double lambda_init = 1e-6;
  // Gamma hyperprior shape/rate parameters.
  double alpha_1 = 1e-6;
  double alpha_2 = 1e-6;
  double lambda_1 = 1e-6;
  double lambda_2 = 1e-6;
};

// Sufficient statistics of (X, y) over a set of rows, centered.
struct RegressionMoments {
  double n = 0.0;
  Eigen::VectorXd x_mean;
  double y_mean = 0.0;
  Eigen::MatrixXd xx;  // centered X'X
  Eigen::VectorXd xy;  // centered X'y
  double yy = 0.0;     // centered y'y
};

RidgeFit fit_bayesian_ridge(const Matrix& X, std::span<const double> y,
                            const BayesianRidgeOptions& options = {});

RidgeFit fit_bayesian_ridge(const RegressionMoments& moments,
                            const BayesianRidgeOptions& options = {});

}  // namespace lifesat

#endif  // LIFESAT_BAYESIAN_RIDGE_HPP_
