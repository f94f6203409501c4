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

#ifndef LIFESAT_PREPROCESS_HPP_
#define LIFESAT_PREPROCESS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lifesat/bayesian_ridge.hpp"
#include "lifesat/table.hpp"

namespace lifesat {

// Drops every feature whose missing fraction is strictly above `threshold`.
std::pair<Dataset, std::vector<std::string>> drop_high_null(const Dataset& train, double threshold = 0.20);

class OrdinalEncoder {
 public:
  OrdinalEncoder() = default;
  OrdinalEncoder(std::string code, std::vector<std::string> categories);

  const std::string& code() const { return code_; }
  const std::vector<std::string>& categories() const { return categories_; }
  // Position of the category, or -1 when unseen.
  int encode(const std::string& category) const;
  const std::string& decode(int value) const;

  bool operator==(const OrdinalEncoder&) const = default;

 private:
  std::string code_;
  std::vector<std::string> categories_;
};

std::vector<OrdinalEncoder> fit_ordinal_encoder(const std::vector<ColumnMeta>& columns);
std::vector<OrdinalEncoder> fit_ordinal_encoder(const Schema& schema);

// Replaces category text with codes. Numeric cells in ordinal columns are
// taken as already encoded and must lie inside the code range.
Dataset apply_encoding(const Dataset& ds, const std::vector<OrdinalEncoder>& encoders);

enum class ImputeMode { kConverge, kSinglePass };

struct ImputeOptions {
  ImputeMode mode = ImputeMode::kConverge;
  int max_rounds = 10;
  double tol = 1e-3;
  bool round_ordinal = true;
  BayesianRidgeOptions ridge;
};

// Frozen imputation state learned on training rows.
struct ImputationModel {
  std::vector<std::string> columns;
  std::vector<double> means;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> ordinal;
  // Column indices in processing order (fewest training gaps first).
  std::vector<std::size_t> order;
  // One regression per entry of `order`, predicting that column from all
  // the others in dataset order.
  std::vector<RidgeFit> fits;
  int rounds = 0;

  Dataset apply(const Dataset& ds, const ImputeOptions& options = {}) const;

  nlohmann::json to_json() const;
  static ImputationModel from_json(const nlohmann::json& doc);
};

// Column processing order used by iterative_impute: ascending missing
// count, ties by column position; complete columns are excluded.
std::vector<std::size_t> imputation_order(const Dataset& ds);

std::pair<Dataset, ImputationModel> iterative_impute(const Dataset& train, const ImputeOptions& options = {});

std::pair<Dataset, std::vector<std::string>> drop_zero_variance(const Dataset& train);

struct OutlierStats {
  std::string code;
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;

  bool operator==(const OutlierStats&) const = default;
};

std::vector<OutlierStats> fit_outlier_stats(const Dataset& train, bool sample_std = true);

// Values strictly outside mean +/- 2 std are replaced by the median. Columns
// with zero std and columns without stats are left alone.
Dataset clamp_outliers(const Dataset& ds, const std::vector<OutlierStats>& stats);

double median_of(std::vector<double> values);

struct PreprocessConfig {
  double null_threshold = 0.20;
  ImputeOptions impute;
  bool sample_std = true;
};

class FittedPreprocessor {
 public:
  enum class Stage { kEncoded, kImputed, kFull };

  // Learns every stage on `train` and returns it transformed.
  static std::pair<FittedPreprocessor, Dataset> fit(const Dataset& train, const PreprocessConfig& config = {});

  // Replays the frozen stages. Input may be raw (all columns kept after the
  // high-null drop are present) or already processed (exactly the output
  // columns, no gaps).
  Dataset apply(const Dataset& ds, Stage until = Stage::kFull) const;

  const std::vector<std::string>& dropped_high_null() const { return dropped_high_null_; }
  const std::vector<OrdinalEncoder>& encoders() const { return encoders_; }
  const ImputationModel& imputation() const { return imputation_; }
  const std::vector<std::string>& dropped_zero_variance() const { return dropped_zero_variance_; }
  const std::vector<OutlierStats>& outlier_stats() const { return outlier_stats_; }
  const std::vector<std::string>& output_codes() const { return output_codes_; }
  const PreprocessConfig& config() const { return config_; }
  const OutlierStats* stats_for(const std::string& code) const;

  nlohmann::json to_json() const;
  static FittedPreprocessor from_json(const nlohmann::json& doc);

 private:
  PreprocessConfig config_;
  std::vector<std::string> dropped_high_null_;
  std::vector<OrdinalEncoder> encoders_;
  ImputationModel imputation_;
  std::vector<std::string> dropped_zero_variance_;
  std::vector<OutlierStats> outlier_stats_;
  std::vector<std::string> output_codes_;
};

}  // namespace lifesat

#endif  // LIFESAT_PREPROCESS_HPP_
