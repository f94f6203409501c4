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

#include "lifesat/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <spdlog/spdlog.h>

namespace lifesat {

namespace {

std::vector<double> observed(const Dataset& ds, std::size_t c) {
  std::vector<double> out;
  out.reserve(ds.rows());
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    if (!ds.is_missing(r, c)) out.push_back(ds.values(r, c));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

bool contains_all(const Dataset& ds, const std::vector<std::string>& codes) {
  return std::all_of(codes.begin(), codes.end(), [&](const std::string& c) { return ds.column_index(c).has_value(); });
}

double round_clip(double v, double lo, double hi) { return std::clamp(std::round(v), lo, hi); }

}  // namespace

std::pair<Dataset, std::vector<std::string>> drop_high_null(const Dataset& train, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("null threshold must lie in [0, 1]");
  const auto profile = missing_profile(train);
  std::vector<std::string> dropped;
  for (std::size_t c = 0; c < train.cols(); ++c) {
    if (profile[c] > threshold) dropped.push_back(train.columns[c].code);
  }
  if (train.cols() > 0 && dropped.size() == train.cols()) {
    throw DegenerateInput("every feature column exceeds the null threshold");
  }
  return {train.drop_columns(dropped), dropped};
}

OrdinalEncoder::OrdinalEncoder(std::string code, std::vector<std::string> categories)
    : code_(std::move(code)), categories_(std::move(categories)) {
  if (categories_.size() < 2) throw InvalidArgument("ordinal column " + code_ + " needs at least 2 categories");
}

int OrdinalEncoder::encode(const std::string& category) const {
  auto it = std::find(categories_.begin(), categories_.end(), category);
  return it == categories_.end() ? -1 : static_cast<int>(it - categories_.begin());
}

const std::string& OrdinalEncoder::decode(int value) const {
  if (value < 0 || static_cast<std::size_t>(value) >= categories_.size()) {
    throw InvalidArgument("code " + std::to_string(value) + " out of range for " + code_);
  }
  return categories_[static_cast<std::size_t>(value)];
}

std::vector<OrdinalEncoder> fit_ordinal_encoder(const std::vector<ColumnMeta>& columns) {
  std::vector<OrdinalEncoder> out;
  for (const auto& col : columns) {
    if (col.kind == ColumnKind::kOrdinal) out.emplace_back(col.code, col.categories);
  }
  return out;
}

std::vector<OrdinalEncoder> fit_ordinal_encoder(const Schema& schema) {
  return fit_ordinal_encoder(schema.feature_columns());
}

Dataset apply_encoding(const Dataset& ds, const std::vector<OrdinalEncoder>& encoders) {
  Dataset out = ds;
  std::unordered_map<std::size_t, const OrdinalEncoder*> by_column;
  for (const auto& enc : encoders) {
    auto idx = ds.column_index(enc.code());
    if (!idx) continue;
    if (ds.columns[*idx].kind != ColumnKind::kOrdinal) {
      throw InvalidArgument("column " + enc.code() + " is not ordinal");
    }
    by_column[*idx] = &enc;
  }
  for (const auto& [key, text] : ds.uncoded) {
    const auto [r, c] = key;
    auto it = by_column.find(c);
    if (it == by_column.end()) throw InvalidArgument("no encoder for column " + ds.columns[c].code);
    const int code = it->second->encode(text);
    if (code < 0) {
      throw ParseError("unseen category '" + text + "' in column " + ds.columns[c].code,
                       static_cast<long>(r + 1), ds.columns[c].code);
    }
    out.values(r, c) = code;
  }
  out.uncoded.clear();
  for (const auto& [c, enc] : by_column) {
    const double hi = static_cast<double>(enc->categories().size() - 1);
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      if (ds.is_missing(r, c) || ds.uncoded.count({r, c})) continue;
      const double v = ds.values(r, c);
      if (!(v >= 0.0 && v <= hi)) {
        throw ParseError("code " + format_double(v) + " outside the category range of " + enc->code(),
                         static_cast<long>(r + 1), enc->code());
      }
    }
  }
  return out;
}

std::vector<std::size_t> imputation_order(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.cols(), 0);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t c = 0; c < ds.cols(); ++c) counts[c] += ds.is_missing(r, c);
  }
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    if (counts[c] > 0) order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
  return order;
}

std::pair<Dataset, ImputationModel> iterative_impute(const Dataset& train, const ImputeOptions& options) {
  if (!train.uncoded.empty()) throw InvalidArgument("imputation needs encoded data");
  if (options.max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  const std::size_t n = train.rows();
  const std::size_t d = train.cols();

  ImputationModel model;
  model.columns = train.codes();
  model.means.resize(d);
  model.lower.resize(d);
  model.upper.resize(d);
  model.ordinal.resize(d);
  std::vector<std::vector<std::size_t>> missing_rows(d);
  for (std::size_t c = 0; c < d; ++c) {
    const auto obs = observed(train, c);
    if (obs.empty() && n > 0) throw DegenerateInput("column " + train.columns[c].code + " has no observed values");
    model.means[c] = obs.empty() ? 0.0 : std::accumulate(obs.begin(), obs.end(), 0.0) / static_cast<double>(obs.size());
    model.ordinal[c] = train.columns[c].kind == ColumnKind::kOrdinal;
    if (model.ordinal[c]) {
      model.lower[c] = 0.0;
      model.upper[c] = static_cast<double>(train.columns[c].categories.size() - 1);
    } else if (!obs.empty()) {
      model.lower[c] = *std::min_element(obs.begin(), obs.end());
      model.upper[c] = *std::max_element(obs.begin(), obs.end());
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (train.is_missing(r, c)) missing_rows[c].push_back(r);
    }
  }
  model.order = imputation_order(train);

  std::size_t empty_rows = 0;
  for (std::size_t r = 0; r < n && d > 0; ++r) {
    bool all = true;
    for (std::size_t c = 0; c < d && all; ++c) all = train.is_missing(r, c);
    empty_rows += all;
  }
  if (empty_rows > 0) spdlog::warn("{} rows have every feature missing; they start from column means", empty_rows);

  Dataset out = train;
  std::fill(out.missing.begin(), out.missing.end(), 0);
  if (model.order.empty()) return {std::move(out), std::move(model)};

  // Work in mean-shifted coordinates so the raw moment sums stay well
  // conditioned.
  Eigen::MatrixXd Z(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      Z(r, c) = train.is_missing(r, c) ? 0.0 : train.values(r, c) - model.means[c];
    }
  }
  const auto di = static_cast<Eigen::Index>(d);
  model.fits.resize(model.order.size());
  const int max_rounds = options.mode == ImputeMode::kSinglePass ? 1 : options.max_rounds;

  for (int round = 1; round <= max_rounds; ++round) {
    Eigen::VectorXd S = Z.colwise().sum().transpose();
    Eigen::MatrixXd G = Z.transpose() * Z;
    double max_change = 0.0;
    for (std::size_t k = 0; k < model.order.size(); ++k) {
      const std::size_t c = model.order[k];
      const auto ci = static_cast<Eigen::Index>(c);
      const auto& rows = missing_rows[c];
      const double nc = static_cast<double>(n - rows.size());

      Eigen::VectorXd Sm = S;
      Eigen::MatrixXd Gm = G;
      if (!rows.empty()) {
        Eigen::MatrixXd Zm(static_cast<Eigen::Index>(rows.size()), di);
        for (std::size_t i = 0; i < rows.size(); ++i) Zm.row(static_cast<Eigen::Index>(i)) = Z.row(static_cast<Eigen::Index>(rows[i]));
        Sm -= Zm.colwise().sum().transpose();
        Gm.noalias() -= Zm.transpose() * Zm;
      }

      std::vector<Eigen::Index> others;
      others.reserve(d - 1);
      for (Eigen::Index j = 0; j < di; ++j) {
        if (j != ci) others.push_back(j);
      }
      const auto p = static_cast<Eigen::Index>(others.size());

      RidgeFit fit;
      if (nc >= 2.0) {
        RegressionMoments m;
        m.n = nc;
        m.x_mean.resize(p);
        m.xy.resize(p);
        m.xx.resize(p, p);
        m.y_mean = Sm(ci) / nc;
        for (Eigen::Index a = 0; a < p; ++a) m.x_mean(a) = Sm(others[a]) / nc;
        for (Eigen::Index a = 0; a < p; ++a) {
          m.xy(a) = Gm(others[a], ci) - nc * m.x_mean(a) * m.y_mean;
          for (Eigen::Index b = 0; b < p; ++b) m.xx(a, b) = Gm(others[a], others[b]) - nc * m.x_mean(a) * m.x_mean(b);
        }
        m.yy = Gm(ci, ci) - nc * m.y_mean * m.y_mean;
        fit = fit_bayesian_ridge(m, options.ridge);
      } else {
        fit.weights.assign(static_cast<std::size_t>(p), 0.0);
      }

      for (std::size_t r : rows) {
        const auto ri = static_cast<Eigen::Index>(r);
        double z = fit.intercept;
        for (Eigen::Index a = 0; a < p; ++a) z += fit.weights[static_cast<std::size_t>(a)] * Z(ri, others[a]);
        double v = z + model.means[c];
        if (model.ordinal[c] && options.round_ordinal) v = round_clip(v, model.lower[c], model.upper[c]);
        const double z_new = v - model.means[c];
        const double delta = z_new - Z(ri, ci);
        if (delta == 0.0) continue;
        max_change = std::max(max_change, std::abs(delta));
        S(ci) += delta;
        for (Eigen::Index j = 0; j < di; ++j) {
          if (j == ci) continue;
          G(ci, j) += delta * Z(ri, j);
          G(j, ci) = G(ci, j);
        }
        G(ci, ci) += z_new * z_new - Z(ri, ci) * Z(ri, ci);
        Z(ri, ci) = z_new;
      }

      // Back to original coordinates.
      double intercept = model.means[c] + fit.intercept;
      for (Eigen::Index a = 0; a < p; ++a) {
        intercept -= fit.weights[static_cast<std::size_t>(a)] * model.means[static_cast<std::size_t>(others[a])];
      }
      fit.intercept = intercept;
      model.fits[k] = std::move(fit);
    }
    model.rounds = round;
    if (max_change < options.tol) break;
  }

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      out.values(r, c) = Z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) + model.means[c];
    }
  }
  // Observed cells are copied verbatim so the shift never perturbs them.
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if (!train.is_missing(r, c)) out.values(r, c) = train.values(r, c);
    }
  }
  return {std::move(out), std::move(model)};
}

Dataset ImputationModel::apply(const Dataset& ds, const ImputeOptions& options) const {
  for (const auto& code : columns) ds.require_column(code);
  if (!ds.uncoded.empty()) throw InvalidArgument("imputation needs encoded data");
  Dataset out = ds.select_columns(columns);
  const std::size_t n = out.rows();
  const std::size_t d = out.cols();

  std::vector<bool> has_model(d, false);
  for (std::size_t c : order) has_model[c] = true;
  std::vector<std::vector<std::size_t>> missing_rows(d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      if (out.is_missing(r, c)) {
        missing_rows[c].push_back(r);
        out.values(r, c) = means[c];
      }
    }
    if (!missing_rows[c].empty() && !has_model[c]) {
      spdlog::warn("column {} was complete in training; filling {} gaps with the training mean", columns[c],
                   missing_rows[c].size());
    }
  }

  std::vector<double> x(d > 0 ? d - 1 : 0);
  const int max_rounds = std::max(rounds, 1);
  for (int round = 0; round < max_rounds; ++round) {
    double max_change = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t c = order[k];
      for (std::size_t r : missing_rows[c]) {
        const auto row = out.values.row(r);
        std::size_t a = 0;
        for (std::size_t j = 0; j < d; ++j) {
          if (j != c) x[a++] = row[j];
        }
        double v = fits[k].predict(x);
        if (ordinal[c] && options.round_ordinal) v = round_clip(v, lower[c], upper[c]);
        max_change = std::max(max_change, std::abs(v - out.values(r, c)));
        out.values(r, c) = v;
      }
    }
    if (max_change < options.tol) break;
  }
  std::fill(out.missing.begin(), out.missing.end(), 0);
  return out;
}

nlohmann::json ImputationModel::to_json() const {
  nlohmann::json fits_json = nlohmann::json::array();
  for (const auto& f : fits) fits_json.push_back(f.to_json());
  return {{"columns", columns}, {"means", means}, {"lower", lower}, {"upper", upper},
          {"ordinal", ordinal}, {"order", order}, {"fits", fits_json}, {"rounds", rounds}};
}

ImputationModel ImputationModel::from_json(const nlohmann::json& doc) {
  ImputationModel m;
  m.columns = doc.at("columns").get<std::vector<std::string>>();
  m.means = doc.at("means").get<std::vector<double>>();
  m.lower = doc.at("lower").get<std::vector<double>>();
  m.upper = doc.at("upper").get<std::vector<double>>();
  m.ordinal = doc.at("ordinal").get<std::vector<bool>>();
  m.order = doc.at("order").get<std::vector<std::size_t>>();
  for (const auto& f : doc.at("fits")) m.fits.push_back(RidgeFit::from_json(f));
  m.rounds = doc.at("rounds").get<int>();
  const auto d = m.columns.size();
  if (m.means.size() != d || m.lower.size() != d || m.upper.size() != d || m.ordinal.size() != d ||
      m.fits.size() != m.order.size()) {
    throw ParseError("imputation model: inconsistent array lengths");
  }
  for (std::size_t k = 0; k < m.order.size(); ++k) {
    if (m.order[k] >= d || m.fits[k].weights.size() + 1 != d) throw ParseError("imputation model: bad regressor shape");
  }
  return m;
}

std::pair<Dataset, std::vector<std::string>> drop_zero_variance(const Dataset& train) {
  std::vector<std::string> dropped;
  for (std::size_t c = 0; c < train.cols(); ++c) {
    const auto obs = observed(train, c);
    const auto [lo, hi] = std::minmax_element(obs.begin(), obs.end());
    if (obs.empty() || *lo == *hi) dropped.push_back(train.columns[c].code);
  }
  return {train.drop_columns(dropped), dropped};
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<OutlierStats> fit_outlier_stats(const Dataset& train, bool sample_std) {
  std::vector<OutlierStats> out;
  for (std::size_t c = 0; c < train.cols(); ++c) {
    const auto obs = observed(train, c);
    if (obs.empty()) continue;
    OutlierStats s;
    s.code = train.columns[c].code;
    const double n = static_cast<double>(obs.size());
    s.mean = std::accumulate(obs.begin(), obs.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : obs) ss += (v - s.mean) * (v - s.mean);
    const double denom = sample_std ? n - 1.0 : n;
    s.std = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
    s.median = median_of(obs);
    out.push_back(std::move(s));
  }
  return out;
}

Dataset clamp_outliers(const Dataset& ds, const std::vector<OutlierStats>& stats) {
  Dataset out = ds;
  for (const auto& s : stats) {
    auto idx = ds.column_index(s.code);
    if (!idx || !(s.std > 0.0)) continue;
    const double lo = s.mean - 2.0 * s.std;
    const double hi = s.mean + 2.0 * s.std;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      if (ds.is_missing(r, *idx)) continue;
      const double v = ds.values(r, *idx);
      if (v < lo || v > hi) out.values(r, *idx) = s.median;
    }
  }
  return out;
}

std::pair<FittedPreprocessor, Dataset> FittedPreprocessor::fit(const Dataset& train, const PreprocessConfig& config) {
  FittedPreprocessor fp;
  fp.config_ = config;
  auto [kept, dropped] = drop_high_null(train, config.null_threshold);
  fp.dropped_high_null_ = std::move(dropped);
  fp.encoders_ = fit_ordinal_encoder(kept.columns);
  Dataset encoded = apply_encoding(kept, fp.encoders_);
  auto [imputed, model] = iterative_impute(encoded, config.impute);
  fp.imputation_ = std::move(model);
  auto [varied, zv_first] = drop_zero_variance(imputed);
  auto stats = fit_outlier_stats(varied, config.sample_std);
  Dataset clamped = clamp_outliers(varied, stats);
  // Clamping can flatten a column whose only spread was its outliers.
  auto [result, zv_second] = drop_zero_variance(clamped);
  fp.dropped_zero_variance_ = std::move(zv_first);
  fp.dropped_zero_variance_.insert(fp.dropped_zero_variance_.end(), zv_second.begin(), zv_second.end());
  std::erase_if(stats, [&](const OutlierStats& s) { return !result.column_index(s.code); });
  fp.outlier_stats_ = std::move(stats);
  fp.output_codes_ = result.codes();
  if (fp.output_codes_.empty()) throw DegenerateInput("preprocessing removed every feature column");
  return {std::move(fp), std::move(result)};
}

Dataset FittedPreprocessor::apply(const Dataset& ds, Stage until) const {
  if (contains_all(ds, imputation_.columns)) {
    Dataset x = apply_encoding(ds.select_columns(imputation_.columns), encoders_);
    if (until == Stage::kEncoded) return x;
    x = imputation_.apply(x, config_.impute);
    if (until == Stage::kImputed) return x;
    return clamp_outliers(x.select_columns(output_codes_), outlier_stats_);
  }
  if (contains_all(ds, output_codes_)) {
    Dataset x = apply_encoding(ds.select_columns(output_codes_), encoders_);
    if (until == Stage::kEncoded) return x;
    if (x.has_missing()) throw InvalidArgument("input has gaps but lacks the columns needed to impute them");
    if (until == Stage::kImputed) return x;
    return clamp_outliers(x, outlier_stats_);
  }
  std::vector<std::string> absent;
  for (const auto& code : imputation_.columns) {
    if (!ds.column_index(code)) absent.push_back(code);
  }
  throw InvalidArgument("input lacks columns: " + join(absent));
}

const OutlierStats* FittedPreprocessor::stats_for(const std::string& code) const {
  for (const auto& s : outlier_stats_) {
    if (s.code == code) return &s;
  }
  return nullptr;
}

nlohmann::json FittedPreprocessor::to_json() const {
  nlohmann::json enc = nlohmann::json::array();
  for (const auto& e : encoders_) enc.push_back({{"code", e.code()}, {"categories", e.categories()}});
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : outlier_stats_) {
    stats.push_back({{"code", s.code}, {"mean", s.mean}, {"std", s.std}, {"median", s.median}});
  }
  return {{"config",
           {{"null_threshold", config_.null_threshold},
            {"sample_std", config_.sample_std},
            {"impute",
             {{"mode", config_.impute.mode == ImputeMode::kConverge ? "converge" : "single_pass"},
              {"max_rounds", config_.impute.max_rounds},
              {"tol", config_.impute.tol},
              {"round_ordinal", config_.impute.round_ordinal}}}}},
          {"dropped_high_null", dropped_high_null_},
          {"encoders", enc},
          {"imputation", imputation_.to_json()},
          {"dropped_zero_variance", dropped_zero_variance_},
          {"outlier_stats", stats},
          {"output_codes", output_codes_}};
}

FittedPreprocessor FittedPreprocessor::from_json(const nlohmann::json& doc) {
  FittedPreprocessor fp;
  const auto& cfg = doc.at("config");
  fp.config_.null_threshold = cfg.at("null_threshold").get<double>();
  fp.config_.sample_std = cfg.at("sample_std").get<bool>();
  const auto& imp = cfg.at("impute");
  fp.config_.impute.mode = imp.at("mode").get<std::string>() == "single_pass" ? ImputeMode::kSinglePass : ImputeMode::kConverge;
  fp.config_.impute.max_rounds = imp.at("max_rounds").get<int>();
  fp.config_.impute.tol = imp.at("tol").get<double>();
  fp.config_.impute.round_ordinal = imp.at("round_ordinal").get<bool>();
  fp.dropped_high_null_ = doc.at("dropped_high_null").get<std::vector<std::string>>();
  for (const auto& e : doc.at("encoders")) {
    fp.encoders_.emplace_back(e.at("code").get<std::string>(), e.at("categories").get<std::vector<std::string>>());
  }
  fp.imputation_ = ImputationModel::from_json(doc.at("imputation"));
  fp.dropped_zero_variance_ = doc.at("dropped_zero_variance").get<std::vector<std::string>>();
  for (const auto& s : doc.at("outlier_stats")) {
    fp.outlier_stats_.push_back({s.at("code").get<std::string>(), s.at("mean").get<double>(), s.at("std").get<double>(),
                                 s.at("median").get<double>()});
  }
  fp.output_codes_ = doc.at("output_codes").get<std::vector<std::string>>();
  return fp;
}

}  // namespace lifesat
