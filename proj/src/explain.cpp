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

#include "lifesat/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace lifesat {

namespace {

constexpr std::size_t kMaxSamples = 1000;

}  // namespace

std::size_t FeatureBins::bin_of(double v) const {
  return static_cast<std::size_t>(std::lower_bound(boundaries.begin(), boundaries.end(), v) - boundaries.begin());
}

std::string FeatureBins::rule(std::size_t bin) const {
  if (boundaries.empty()) return code + " = " + format_threshold(constant);
  if (bin == 0) return code + " <= " + format_threshold(boundaries.front());
  if (bin >= boundaries.size()) return code + " > " + format_threshold(boundaries.back());
  return format_threshold(boundaries[bin - 1]) + " < " + code + " <= " + format_threshold(boundaries[bin]);
}

nlohmann::json DiscretizerStats::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : features) {
    arr.push_back({{"code", f.code}, {"boundaries", f.boundaries}, {"constant", f.constant}, {"samples", f.samples}});
  }
  return {{"features", arr}};
}

DiscretizerStats DiscretizerStats::from_json(const nlohmann::json& doc) {
  DiscretizerStats s;
  for (const auto& f : doc.at("features")) {
    FeatureBins b;
    b.code = f.at("code").get<std::string>();
    b.boundaries = f.at("boundaries").get<std::vector<double>>();
    b.constant = f.at("constant").get<double>();
    b.samples = f.at("samples").get<std::vector<double>>();
    if (!std::is_sorted(b.boundaries.begin(), b.boundaries.end())) throw ParseError("bin boundaries out of order");
    if (b.samples.empty()) throw ParseError("feature " + b.code + " has no samples");
    s.features.push_back(std::move(b));
  }
  return s;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DiscretizerStats fit_discretizer(const Dataset& train) {
  if (train.has_missing()) throw InvalidArgument("discretizer needs complete data");
  if (train.rows() == 0) throw InvalidArgument("discretizer needs rows");
  DiscretizerStats out;
  for (std::size_t c = 0; c < train.cols(); ++c) {
    auto v = train.values.column(c);
    std::sort(v.begin(), v.end());
    FeatureBins b;
    b.code = train.columns[c].code;
    if (v.front() == v.back()) {
      b.constant = v.front();
    } else {
      for (double q : {0.25, 0.5, 0.75}) {
        const double t = quantile_sorted(v, q);
        if (b.boundaries.empty() || t > b.boundaries.back()) b.boundaries.push_back(t);
      }
    }
    // Evenly spaced order statistics keep the marginal shape.
    const std::size_t keep = std::min(kMaxSamples, v.size());
    for (std::size_t i = 0; i < keep; ++i) {
      const std::size_t at = keep == 1 ? 0 : i * (v.size() - 1) / (keep - 1);
      b.samples.push_back(v[at]);
    }
    out.features.push_back(std::move(b));
  }
  return out;
}

double Explanation::surrogate(std::span<const double> binary, const std::vector<std::string>& codes) const {
  double s = intercept;
  for (const auto& c : contributions) {
    const auto it = std::find(codes.begin(), codes.end(), c.code);
    if (it == codes.end()) throw InvalidArgument("unknown feature " + c.code);
    s += c.weight * binary[static_cast<std::size_t>(it - codes.begin())];
  }
  return s;
}

nlohmann::json Explanation::to_json(std::size_t top_k) const {
  nlohmann::json rules = nlohmann::json::array();
  const std::size_t n = top_k == 0 ? contributions.size() : std::min(top_k, contributions.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = contributions[i];
    rules.push_back({{"code", c.code}, {"rule", c.rule}, {"weight", c.weight}});
  }
  return {{"probabilities", {{class_name(kDiscontent), class_probs[0]}, {class_name(kContent), class_probs[1]}}},
          {"explained_class", class_name(explained_class)},
          {"contributions", rules},
          {"total_contributions", contributions.size()},
          {"intercept", intercept},
          {"local_prediction", local_prediction},
          {"fidelity", fidelity},
          {"kernel_width", kernel_width},
          {"n_samples", n_samples}};
}

namespace {

std::vector<std::string> codes_of(const DiscretizerStats& stats) {
  std::vector<std::string> out;
  for (const auto& f : stats.features) out.push_back(f.code);
  return out;
}

}  // namespace

double fidelity_score(const Explanation& explanation, const DiscretizerStats& stats, const Perturbations& p) {
  const auto codes = codes_of(stats);
  double wsum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < p.target.size(); ++i) {
    wsum += p.kernel[i];
    mean += p.kernel[i] * p.target[i];
  }
  if (!(wsum > 0.0)) return 1.0;
  mean /= wsum;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < p.target.size(); ++i) {
    const double e = p.target[i] - explanation.surrogate(p.binary.row(i), codes);
    ss_res += p.kernel[i] * e * e;
    ss_tot += p.kernel[i] * (p.target[i] - mean) * (p.target[i] - mean);
  }
  if (ss_tot <= 1e-300) return ss_res <= 1e-18 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

Explanation explain_instance(const Classifier& model, std::span<const double> instance,
                             const DiscretizerStats& stats, const ExplainOptions& options, Perturbations* kept) {
  const std::size_t d = stats.size();
  if (options.n_samples < 10) throw InvalidArgument("explanation needs at least 10 samples");
  if (instance.size() != d) {
    throw DimensionMismatch("instance has " + std::to_string(instance.size()) + " features, expected " +
                            std::to_string(d));
  }
  if (model.n_features() != d) throw DimensionMismatch("model expects " + std::to_string(model.n_features()) + " features");
  if (options.explained_class != kContent && options.explained_class != kDiscontent) {
    throw InvalidArgument("explained class must be 0 or 1");
  }
  const double width = options.kernel_width.value_or(0.75 * std::sqrt(static_cast<double>(d)));
  if (!(width > 0.0)) throw InvalidArgument("kernel width must be positive");

  std::vector<std::size_t> home(d);
  for (std::size_t j = 0; j < d; ++j) home[j] = stats.features[j].bin_of(instance[j]);

  const std::size_t n = options.n_samples;
  Perturbations p;
  p.samples = Matrix(n, d);
  p.binary = Matrix(n, d, 1.0);
  Rng rng(options.seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double v = instance[j];
      // Row 0 is the instance itself.
      if (i > 0 && rng.uniform() < 0.5) {
        const auto& s = stats.features[j].samples;
        v = s[rng.below(s.size())];
      }
      p.samples(i, j) = v;
      p.binary(i, j) = stats.features[j].bin_of(v) == home[j] ? 1.0 : 0.0;
    }
  }
  bool varied = false;
  for (std::size_t i = 1; i < n && !varied; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (p.binary(i, j) != 1.0) {
        varied = true;
        break;
      }
    }
  }
  if (!varied) throw DegenerateInput("all perturbations are identical to the instance");

  const auto proba = model.predict_proba(p.samples);
  const auto cls = static_cast<std::size_t>(options.explained_class);
  p.kernel.resize(n);
  p.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) dist2 += (1.0 - p.binary(i, j)) * (1.0 - p.binary(i, j));
    p.kernel[i] = std::exp(-dist2 / (width * width));
    p.target[i] = proba[i][cls];
  }

  // Weighted ridge with an unpenalized intercept, solved in centered form.
  const auto en = static_cast<Eigen::Index>(n);
  const auto ed = static_cast<Eigen::Index>(d);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Z(p.binary.data().data(),
                                                                                              en, ed);
  const Eigen::Map<const Eigen::VectorXd> w(p.kernel.data(), en);
  const Eigen::Map<const Eigen::VectorXd> t(p.target.data(), en);
  const double wsum = w.sum();
  const Eigen::RowVectorXd zbar = (w.transpose() * Z) / wsum;
  const double tbar = w.dot(t) / wsum;
  const Eigen::MatrixXd Zc = Z.rowwise() - zbar;
  const Eigen::VectorXd tc = t.array() - tbar;
  Eigen::MatrixXd A = Zc.transpose() * w.asDiagonal() * Zc;
  A.diagonal().array() += options.ridge_lambda;
  const Eigen::VectorXd b = Zc.transpose() * (w.array() * tc.array()).matrix();
  const Eigen::VectorXd beta = A.ldlt().solve(b);

  Explanation ex;
  ex.class_probs = model.predict_proba_row(instance);
  ex.explained_class = options.explained_class;
  ex.intercept = tbar - zbar.dot(beta);
  ex.kernel_width = width;
  ex.n_samples = n;
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b2) { return std::abs(beta(a)) > std::abs(beta(b2)); });
  double local = ex.intercept;
  for (std::size_t j : order) {
    const double wj = beta(static_cast<Eigen::Index>(j));
    ex.contributions.push_back({stats.features[j].code, stats.features[j].rule(home[j]), wj});
  }
  for (std::size_t j = 0; j < d; ++j) local += beta(static_cast<Eigen::Index>(j));
  ex.local_prediction = local;
  ex.fidelity = fidelity_score(ex, stats, p);
  if (kept) *kept = std::move(p);
  return ex;
}

}  // namespace lifesat
