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

#ifndef LIFESAT_TABLE_HPP_
#define LIFESAT_TABLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lifesat/common.hpp"

namespace lifesat {

enum class ColumnKind { kOrdinal, kNumeric, kLabel };

std::string to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& text);

// One survey item. Category order defines the ordinal encoding: the category
// at position k is encoded as k.
struct ColumnMeta {
  std::string code;
  std::string prompt;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<std::string> categories;
  // Questionnaire panel (physical, mental, economic, social, cultural).
  std::string group;
  std::optional<double> min_value;
  std::optional<double> max_value;

  bool operator==(const ColumnMeta&) const = default;
};

std::string class_name(int label);

class Schema {
 public:
  Schema() = default;
  Schema(std::vector<ColumnMeta> columns, std::string target_code,
         std::optional<double> label_threshold = std::nullopt);

  const std::vector<ColumnMeta>& columns() const { return columns_; }
  const std::string& target_code() const { return target_code_; }
  // Raw target values >= threshold are Content. Without a threshold the
  // target column must already hold 0/1 (or Content/Discontent).
  const std::optional<double>& label_threshold() const { return label_threshold_; }

  const ColumnMeta* find(const std::string& code) const;
  std::vector<ColumnMeta> feature_columns() const;

  // Throws InvalidArgument when an invariant does not hold.
  void validate() const;

  nlohmann::json to_json() const;
  static Schema from_json(const nlohmann::json& doc);
  static Schema load(const std::string& path);

  bool operator==(const Schema&) const = default;

 private:
  std::vector<ColumnMeta> columns_;
  std::string target_code_;
  std::optional<double> label_threshold_;
};

// Column-oriented survey table: feature values row-major with a parallel
// missing mask. Masked cells hold NaN and are skipped by every statistic.
struct Dataset {
  std::vector<ColumnMeta> columns;
  std::string target_code = "label";
  Matrix values;
  std::vector<std::uint8_t> missing;
  std::optional<std::vector<int>> labels;
  // Provenance of each row: index in the source file, or a fresh id with the
  // top bit set for synthetic rows.
  std::vector<std::uint64_t> row_ids;
  // Ordinal cells read as category text and not yet encoded, keyed by
  // (row, column). Their value is NaN until apply_encoding runs.
  std::map<std::pair<std::size_t, std::size_t>, std::string> uncoded;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return columns.size(); }
  bool is_missing(std::size_t r, std::size_t c) const { return missing[r * cols() + c] != 0; }
  bool has_missing() const;
  std::optional<std::size_t> column_index(const std::string& code) const;
  std::size_t require_column(const std::string& code) const;
  std::vector<std::string> codes() const;

  // Throws InvalidArgument when shapes disagree.
  void validate() const;

  Dataset subset_rows(std::span<const std::size_t> indices) const;
  Dataset select_columns(std::span<const std::string> codes) const;
  Dataset drop_columns(std::span<const std::string> codes) const;

  bool operator==(const Dataset&) const;
};

inline constexpr std::uint64_t kSyntheticRowBit = 1ULL << 63;

// Builds a dataset with a full (all false) mask and sequential row ids.
Dataset make_dataset(std::vector<ColumnMeta> columns, Matrix values,
                     std::optional<std::vector<int>> labels = std::nullopt);

std::vector<ColumnMeta> numeric_columns(std::size_t count, const std::string& prefix = "x");

struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
};

// Plain seeded shuffle then cut; no stratification.
SplitPair shuffle_split(const Dataset& ds, double train_fraction, std::uint64_t seed);

// Fraction of masked cells per column.
std::vector<double> missing_profile(const Dataset& ds);

std::vector<std::size_t> class_counts(std::span<const int> labels);

}  // namespace lifesat

#endif  // LIFESAT_TABLE_HPP_
