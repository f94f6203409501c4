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

#include "lifesat/selection.hpp"

#include <algorithm>
#include <numeric>

#include <spdlog/spdlog.h>

namespace lifesat {

std::vector<std::pair<std::string, double>> ranked_importances(const RandomForestModel& forest,
                                                               const std::vector<std::string>& codes) {
  const auto imp = impurity_importances(forest);
  if (imp.size() != codes.size()) throw DimensionMismatch("importance count differs from code count");
  std::vector<std::size_t> order(imp.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i : order) out.emplace_back(codes[i], imp[i]);
  return out;
}

nlohmann::json RfecvResult::to_json() const {
  nlohmann::json curve_json = nlohmann::json::array();
  for (const auto& [n, s] : curve) curve_json.push_back({{"n_features", n}, {"cv_score", s}});
  nlohmann::json imp = nlohmann::json::array();
  for (const auto& [c, v] : importances) imp.push_back({{"code", c}, {"importance", v}});
  return {{"selected", selected_codes}, {"ranking", ranking}, {"curve", curve_json}, {"folds", folds},
          {"importances", imp}};
}

RfecvResult rfecv(const Dataset& ds, const RfecvOptions& options) {
  if (options.estimator.kind != "random_forest") throw InvalidArgument("RFECV estimator must be a random forest");
  if (!ds.labels) throw InvalidArgument("RFECV needs labels");
  if (ds.has_missing()) throw InvalidArgument("RFECV needs complete data");
  const std::size_t d = ds.cols();
  if (d < 2) throw InvalidArgument("RFECV needs at least 2 features");
  if (options.step < 1) throw InvalidArgument("RFECV step must be at least 1");
  if (ds.rows() < options.k_folds) throw InvalidArgument("fewer rows than folds");
  const std::size_t floor_count = std::clamp<std::size_t>(options.min_features, 1, d);
  const auto& y = *ds.labels;

  std::vector<std::size_t> current(d);
  std::iota(current.begin(), current.end(), 0);
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> eliminated_at(d, 0);
  RfecvResult out;
  out.folds = options.k_folds;
  std::size_t round = 0;
  while (true) {
    const Matrix X = ds.values.select_cols(current);
    const auto cv = cross_validate(options.estimator, X, y, options.k_folds, options.metric, options.seed,
                                   options.stratified);
    out.curve.emplace_back(current.size(), cv.mean);
    subsets.push_back(current);
    spdlog::debug("rfecv: {} features, cv {:.4f}", current.size(), cv.mean);
    if (current.size() <= floor_count) break;
    const auto forest = std::dynamic_pointer_cast<const RandomForestModel>(
        fit_model(options.estimator, X, y, {}, derive_seed(options.seed, 7)));
    const auto imp = impurity_importances(*forest);
    std::vector<std::size_t> order(current.size());
    std::iota(order.begin(), order.end(), 0);
    // Weakest first; equal importance drops the later column first.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return imp[a] < imp[b] || (imp[a] == imp[b] && a > b);
    });
    const std::size_t drop = std::min(options.step, current.size() - floor_count);
    std::vector<char> gone(current.size(), 0);
    ++round;
    for (std::size_t i = 0; i < drop; ++i) {
      gone[order[i]] = 1;
      eliminated_at[current[order[i]]] = round;
    }
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (!gone[i]) next.push_back(current[i]);
    }
    current = std::move(next);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.curve.size(); ++i) {
    // Later entries have fewer features, so ties move toward them.
    if (out.curve[i].second >= out.curve[best].second) best = i;
  }
  const auto& chosen = subsets[best];
  for (std::size_t j : chosen) out.selected_codes.push_back(ds.columns[j].code);

  // Rank: selected = 1, then by reverse elimination round.
  out.ranking.assign(d, 1);
  std::vector<char> selected(d, 0);
  for (std::size_t j : chosen) selected[j] = 1;
  std::size_t last_round = 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (!selected[j]) last_round = std::max(last_round, eliminated_at[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!selected[j]) out.ranking[j] = 1 + (last_round - eliminated_at[j]) + 1;
  }

  const Matrix Xs = ds.values.select_cols(chosen);
  const auto forest = std::dynamic_pointer_cast<const RandomForestModel>(
      fit_model(options.estimator, Xs, y, {}, derive_seed(options.seed, 7)));
  out.importances = ranked_importances(*forest, out.selected_codes);
  return out;
}

Matrix PcaModel::transform(const Matrix& X) const {
  const auto d = static_cast<std::size_t>(mean.size());
  if (X.cols() != d) throw DimensionMismatch("PCA expects " + std::to_string(d) + " features");
  Matrix out(X.rows(), k);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        s += (X(r, j) - mean(static_cast<Eigen::Index>(j))) *
             components(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      }
      out(r, c) = s;
    }
  }
  return out;
}

Matrix PcaModel::inverse_transform(const Matrix& scores) const {
  const auto d = static_cast<std::size_t>(mean.size());
  const std::size_t kk = scores.cols();
  if (kk > static_cast<std::size_t>(components.cols())) throw DimensionMismatch("too many PCA scores");
  Matrix out(scores.rows(), d);
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = mean(static_cast<Eigen::Index>(j));
      for (std::size_t c = 0; c < kk; ++c) {
        s += scores(r, c) * components(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      }
      out(r, j) = s;
    }
  }
  return out;
}

nlohmann::json PcaModel::to_json() const {
  std::vector<double> m(mean.data(), mean.data() + mean.size());
  std::vector<std::vector<double>> comps;
  for (Eigen::Index c = 0; c < components.cols(); ++c) {
    comps.emplace_back(components.col(c).data(), components.col(c).data() + components.rows());
  }
  return {{"input_codes", input_codes}, {"mean", m}, {"components", comps}, {"explained_ratio", explained_ratio},
          {"k", k}, {"target", target}};
}

PcaModel PcaModel::from_json(const nlohmann::json& doc) {
  PcaModel p;
  p.input_codes = doc.at("input_codes").get<std::vector<std::string>>();
  const auto m = doc.at("mean").get<std::vector<double>>();
  const auto comps = doc.at("components").get<std::vector<std::vector<double>>>();
  p.mean = Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
  p.components.resize(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(comps.size()));
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (comps[c].size() != m.size()) throw ParseError("PCA component length differs from mean length");
    for (std::size_t j = 0; j < m.size(); ++j) {
      p.components(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = comps[c][j];
    }
  }
  p.explained_ratio = doc.at("explained_ratio").get<std::vector<double>>();
  p.k = doc.at("k").get<std::size_t>();
  p.target = doc.at("target").get<double>();
  if (p.k > comps.size()) throw ParseError("PCA keeps more components than it stores");
  return p;
}

PcaModel fit_pca(const Matrix& X, double target, std::vector<std::string> codes) {
  if (!(target > 0.0 && target <= 1.0)) throw InvalidArgument("PCA variance target must lie in (0, 1]");
  if (X.rows() < 2 || X.cols() == 0) throw InvalidArgument("PCA needs at least 2 rows and 1 column");
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw InvalidArgument("PCA needs complete data");
  }
  const auto n = static_cast<Eigen::Index>(X.rows());
  const auto d = static_cast<Eigen::Index>(X.cols());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> xm(X.data().data(), n, d);
  PcaModel p;
  p.target = target;
  p.input_codes = std::move(codes);
  p.mean = xm.colwise().mean().transpose();
  const Eigen::MatrixXd xc = xm.rowwise() - p.mean.transpose();
  const Eigen::MatrixXd cov = (xc.transpose() * xc) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd vals = eig.eigenvalues().reverse();
  Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();
  for (Eigen::Index i = 0; i < d; ++i) vals(i) = std::max(vals(i), 0.0);
  const double total = vals.sum();
  if (!(total > 0.0)) throw DegenerateInput("PCA input has no variance");
  for (Eigen::Index c = 0; c < d; ++c) {
    // Largest-magnitude loading positive, for reproducible signs.
    Eigen::Index arg = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, c) < 0.0) vecs.col(c) *= -1.0;
  }
  p.components = vecs;
  double cum = 0.0;
  p.k = static_cast<std::size_t>(d);
  bool found = false;
  for (Eigen::Index i = 0; i < d; ++i) {
    p.explained_ratio.push_back(vals(i) / total);
    cum += vals(i) / total;
    if (!found && cum >= target - 1e-12) {
      p.k = static_cast<std::size_t>(i + 1);
      found = true;
    }
  }
  return p;
}

Dataset pca_apply(const PcaModel& model, const Dataset& ds) {
  Matrix X = ds.values;
  if (!model.input_codes.empty()) {
    std::vector<std::size_t> idx;
    for (const auto& c : model.input_codes) idx.push_back(ds.require_column(c));
    X = ds.values.select_cols(idx);
  }
  Dataset out = make_dataset(numeric_columns(model.k, "PC"), model.transform(X), ds.labels);
  for (std::size_t c = 0; c < model.k; ++c) out.columns[c].code = "PC" + std::to_string(c + 1);
  out.target_code = ds.target_code;
  out.row_ids = ds.row_ids;
  return out;
}

std::pair<PcaModel, Dataset> pca_reduce(const Dataset& ds, double target) {
  if (ds.has_missing()) throw InvalidArgument("PCA needs complete data");
  PcaModel model = fit_pca(ds.values, target, ds.codes());
  Dataset out = pca_apply(model, ds);
  return {std::move(model), std::move(out)};
}

}  // namespace lifesat
