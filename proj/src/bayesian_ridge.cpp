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

#include "lifesat/bayesian_ridge.hpp"

#include <algorithm>
#include <cmath>

namespace lifesat {

double RidgeFit::predict(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw DimensionMismatch("ridge predict: expected " + std::to_string(weights.size()) + " inputs");
  }
  double out = intercept;
  for (std::size_t i = 0; i < x.size(); ++i) out += weights[i] * x[i];
  return out;
}

nlohmann::json RidgeFit::to_json() const {
  return {{"weights", weights}, {"intercept", intercept}, {"alpha", alpha},
          {"lambda", lambda},   {"iterations", iterations}};
}

RidgeFit RidgeFit::from_json(const nlohmann::json& doc) {
  RidgeFit fit;
  fit.weights = doc.at("weights").get<std::vector<double>>();
  fit.intercept = doc.at("intercept").get<double>();
  fit.alpha = doc.at("alpha").get<double>();
  fit.lambda = doc.at("lambda").get<double>();
  fit.iterations = doc.at("iterations").get<int>();
  return fit;
}

RidgeFit fit_bayesian_ridge(const Matrix& X, std::span<const double> y,
                            const BayesianRidgeOptions& options) {
  if (X.rows() != y.size()) throw DimensionMismatch("bayesian ridge: row count differs from target length");
  if (X.rows() < 2) throw InvalidArgument("bayesian ridge needs at least 2 rows");
  const auto n = static_cast<Eigen::Index>(X.rows());
  const auto p = static_cast<Eigen::Index>(X.cols());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> xm(
      X.data().data(), n, p);
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);

  RegressionMoments m;
  m.n = static_cast<double>(n);
  m.x_mean = xm.colwise().mean().transpose();
  m.y_mean = ym.mean();
  const Eigen::MatrixXd xc = xm.rowwise() - m.x_mean.transpose();
  const Eigen::VectorXd yc = ym.array() - m.y_mean;
  m.xx = xc.transpose() * xc;
  m.xy = xc.transpose() * yc;
  m.yy = yc.squaredNorm();
  return fit_bayesian_ridge(m, options);
}

RidgeFit fit_bayesian_ridge(const RegressionMoments& m, const BayesianRidgeOptions& options) {
  const auto p = m.xx.rows();
  RidgeFit fit;
  fit.weights.assign(static_cast<std::size_t>(p), 0.0);
  fit.intercept = m.y_mean;
  fit.alpha = options.alpha_init;
  fit.lambda = options.lambda_init;

  const double y_scale = std::max(1.0, m.n * m.y_mean * m.y_mean);
  if (p == 0 || m.yy <= 1e-14 * y_scale) return fit;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.xx);
  Eigen::VectorXd evals = eig.eigenvalues();
  const Eigen::MatrixXd& evecs = eig.eigenvectors();
  const double max_eval = std::max(evals.maxCoeff(), 0.0);
  // Directions with no spread in X carry no information; zeroing them keeps
  // the coefficients finite for collinear inputs.
  std::vector<bool> active(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    active[static_cast<std::size_t>(i)] = evals(i) > 1e-12 * max_eval && evals(i) > 0.0;
  }
  const Eigen::VectorXd q = evecs.transpose() * m.xy;

  double alpha = options.alpha_init;
  double lambda = options.lambda_init;
  Eigen::VectorXd w(p);
  auto solve = [&](double a, double l) {
    Eigen::VectorXd z(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      z(i) = active[static_cast<std::size_t>(i)] ? q(i) / (evals(i) + l / a) : 0.0;
    }
    w = evecs * z;
  };

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    solve(alpha, lambda);
    const double rss = std::max(0.0, m.yy - 2.0 * w.dot(m.xy) + w.dot(m.xx * w));
    double gamma = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (active[static_cast<std::size_t>(i)]) gamma += alpha * evals(i) / (lambda + alpha * evals(i));
    }
    const double lambda_new = (gamma + 2.0 * options.lambda_1) / (w.squaredNorm() + 2.0 * options.lambda_2);
    const double alpha_new = (m.n - gamma + 2.0 * options.alpha_1) / (rss + 2.0 * options.alpha_2);
    const double d_alpha = std::abs(alpha_new - alpha) / alpha;
    const double d_lambda = std::abs(lambda_new - lambda) / lambda;
    alpha = alpha_new;
    lambda = lambda_new;
    if (d_alpha < options.tolerance && d_lambda < options.tolerance) {
      ++iter;
      break;
    }
  }
  solve(alpha, lambda);

  fit.alpha = alpha;
  fit.lambda = lambda;
  fit.iterations = iter;
  for (Eigen::Index i = 0; i < p; ++i) fit.weights[static_cast<std::size_t>(i)] = w(i);
  fit.intercept = m.y_mean - w.dot(m.x_mean);
  return fit;
}

}  // namespace lifesat
