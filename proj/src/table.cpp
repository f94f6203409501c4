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

#include "lifesat/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>

namespace lifesat {

std::string to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kOrdinal:
      return "ordinal";
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kLabel:
      return "label";
  }
  return "numeric";
}

ColumnKind column_kind_from_string(const std::string& text) {
  if (text == "ordinal") return ColumnKind::kOrdinal;
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "label") return ColumnKind::kLabel;
  throw ParseError("unknown column kind '" + text + "'");
}

std::string class_name(int label) { return label == kContent ? "Content" : "Discontent"; }

Schema::Schema(std::vector<ColumnMeta> columns, std::string target_code,
               std::optional<double> label_threshold)
    : columns_(std::move(columns)),
      target_code_(std::move(target_code)),
      label_threshold_(label_threshold) {
  validate();
}

const ColumnMeta* Schema::find(const std::string& code) const {
  for (const auto& c : columns_) {
    if (c.code == code) return &c;
  }
  return nullptr;
}

std::vector<ColumnMeta> Schema::feature_columns() const {
  std::vector<ColumnMeta> out;
  for (const auto& c : columns_) {
    if (c.code != target_code_) out.push_back(c);
  }
  return out;
}

void Schema::validate() const {
  std::set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.code.empty()) throw InvalidArgument("schema column with empty code");
    if (!seen.insert(c.code).second) throw InvalidArgument("duplicate schema code " + c.code);
    if (c.kind == ColumnKind::kOrdinal && c.categories.size() < 2) {
      throw InvalidArgument("ordinal column " + c.code + " needs at least 2 categories");
    }
    if (c.kind == ColumnKind::kNumeric && !c.categories.empty()) {
      throw InvalidArgument("numeric column " + c.code + " must not declare categories");
    }
    if (c.kind == ColumnKind::kLabel && c.code != target_code_) {
      throw InvalidArgument("label column " + c.code + " is not the target");
    }
  }
  const ColumnMeta* target = find(target_code_);
  if (target == nullptr) throw InvalidArgument("target code " + target_code_ + " not in schema");
  if (target->kind != ColumnKind::kLabel) {
    throw InvalidArgument("target column " + target_code_ + " must have kind label");
  }
}

nlohmann::json Schema::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns_) {
    nlohmann::json j{{"code", c.code}, {"prompt", c.prompt}, {"kind", to_string(c.kind)}};
    if (!c.categories.empty()) j["categories"] = c.categories;
    if (!c.group.empty()) j["group"] = c.group;
    if (c.min_value) j["min"] = *c.min_value;
    if (c.max_value) j["max"] = *c.max_value;
    cols.push_back(std::move(j));
  }
  nlohmann::json doc{{"target", target_code_}, {"columns", cols}};
  if (label_threshold_) doc["label_threshold"] = *label_threshold_;
  return doc;
}

Schema Schema::from_json(const nlohmann::json& doc) {
  try {
    std::vector<ColumnMeta> cols;
    for (const auto& j : doc.at("columns")) {
      ColumnMeta c;
      c.code = j.at("code").get<std::string>();
      c.prompt = j.value("prompt", std::string{});
      c.kind = column_kind_from_string(j.value("kind", std::string{"numeric"}));
      if (j.contains("categories")) c.categories = j.at("categories").get<std::vector<std::string>>();
      c.group = j.value("group", std::string{});
      if (j.contains("min")) c.min_value = j.at("min").get<double>();
      if (j.contains("max")) c.max_value = j.at("max").get<double>();
      cols.push_back(std::move(c));
    }
    std::optional<double> threshold;
    if (doc.contains("label_threshold") && !doc.at("label_threshold").is_null()) {
      threshold = doc.at("label_threshold").get<double>();
    }
    return Schema(std::move(cols), doc.at("target").get<std::string>(), threshold);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
}

Schema Schema::load(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("schema file " + path + ": " + e.what());
  }
  return from_json(doc);
}

bool Dataset::has_missing() const {
  return std::any_of(missing.begin(), missing.end(), [](std::uint8_t m) { return m != 0; });
}

std::optional<std::size_t> Dataset::column_index(const std::string& code) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].code == code) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::require_column(const std::string& code) const {
  auto idx = column_index(code);
  if (!idx) throw InvalidArgument("dataset has no column " + code);
  return *idx;
}

std::vector<std::string> Dataset::codes() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.code);
  return out;
}

void Dataset::validate() const {
  if (values.rows() > 0 && values.cols() != columns.size()) {
    throw InvalidArgument("dataset has " + std::to_string(values.cols()) + " value columns but " +
                          std::to_string(columns.size()) + " column descriptors");
  }
  if (missing.size() != values.rows() * columns.size()) {
    throw InvalidArgument("missing mask shape differs from values");
  }
  if (labels && labels->size() != values.rows()) {
    throw InvalidArgument("label count differs from row count");
  }
  if (row_ids.size() != values.rows()) throw InvalidArgument("row id count differs from row count");
}

Dataset Dataset::subset_rows(std::span<const std::size_t> indices) const {
  Dataset out;
  out.columns = columns;
  out.target_code = target_code;
  out.values = values.rows() == 0 ? Matrix(0, columns.size()) : values.select_rows(indices);
  if (indices.empty()) out.values = Matrix(0, columns.size());
  out.missing.resize(indices.size() * cols());
  out.row_ids.resize(indices.size());
  if (labels) out.labels = std::vector<int>(indices.size());
  std::map<std::size_t, std::size_t> new_index;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t src = indices[i];
    std::copy_n(missing.begin() + static_cast<std::ptrdiff_t>(src * cols()), cols(),
                out.missing.begin() + static_cast<std::ptrdiff_t>(i * cols()));
    out.row_ids[i] = row_ids[src];
    if (labels) (*out.labels)[i] = (*labels)[src];
    if (!uncoded.empty()) new_index.emplace(src, i);
  }
  for (const auto& [cell, text] : uncoded) {
    auto it = new_index.find(cell.first);
    if (it != new_index.end()) out.uncoded.emplace(std::make_pair(it->second, cell.second), text);
  }
  return out;
}

Dataset Dataset::select_columns(std::span<const std::string> wanted) const {
  std::vector<std::size_t> idx;
  idx.reserve(wanted.size());
  for (const auto& code : wanted) idx.push_back(require_column(code));
  Dataset out;
  out.target_code = target_code;
  for (auto i : idx) out.columns.push_back(columns[i]);
  out.values = values.rows() == 0 ? Matrix(0, idx.size()) : values.select_cols(idx);
  out.missing.resize(rows() * idx.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out.missing[r * idx.size() + j] = missing[r * cols() + idx[j]];
    }
  }
  out.labels = labels;
  out.row_ids = row_ids;
  for (const auto& [cell, text] : uncoded) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[j] == cell.second) out.uncoded.emplace(std::make_pair(cell.first, j), text);
    }
  }
  return out;
}

Dataset Dataset::drop_columns(std::span<const std::string> drop) const {
  std::set<std::string> dropped(drop.begin(), drop.end());
  std::vector<std::string> keep;
  for (const auto& c : columns) {
    if (!dropped.count(c.code)) keep.push_back(c.code);
  }
  return select_columns(keep);
}

bool Dataset::operator==(const Dataset& other) const {
  if (columns != other.columns || target_code != other.target_code || missing != other.missing ||
      labels != other.labels || row_ids != other.row_ids || uncoded != other.uncoded ||
      values.rows() != other.values.rows() || values.cols() != other.values.cols()) {
    return false;
  }
  // Bitwise so NaN placeholders compare equal.
  return std::memcmp(values.data().data(), other.values.data().data(),
                     values.data().size() * sizeof(double)) == 0;
}

Dataset make_dataset(std::vector<ColumnMeta> columns, Matrix values,
                     std::optional<std::vector<int>> labels) {
  Dataset ds;
  ds.columns = std::move(columns);
  if (values.rows() == 0) values = Matrix(0, ds.columns.size());
  ds.values = std::move(values);
  ds.missing.assign(ds.values.rows() * ds.columns.size(), 0);
  ds.labels = std::move(labels);
  ds.row_ids.resize(ds.values.rows());
  for (std::size_t i = 0; i < ds.row_ids.size(); ++i) ds.row_ids[i] = i;
  ds.validate();
  return ds;
}

std::vector<ColumnMeta> numeric_columns(std::size_t count, const std::string& prefix) {
  std::vector<ColumnMeta> cols(count);
  for (std::size_t i = 0; i < count; ++i) {
    cols[i].code = prefix + std::to_string(i);
    cols[i].kind = ColumnKind::kNumeric;
  }
  return cols;
}

SplitPair shuffle_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train_fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = ds.rows();
  if (n < 2) throw InvalidArgument("shuffle_split needs at least 2 rows");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return SplitPair{ds.subset_rows(train_idx), ds.subset_rows(test_idx), seed};
}

std::vector<double> missing_profile(const Dataset& ds) {
  std::vector<double> out(ds.cols(), 0.0);
  if (ds.rows() == 0) return out;
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < ds.rows(); ++r) count += ds.is_missing(r, c) ? 1 : 0;
    out[c] = static_cast<double>(count) / static_cast<double>(ds.rows());
  }
  return out;
}

std::vector<std::size_t> class_counts(std::span<const int> labels) {
  std::vector<std::size_t> counts(2, 0);
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
    ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

}  // namespace lifesat
