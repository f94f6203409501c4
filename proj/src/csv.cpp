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

#include "lifesat/csv.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace lifesat {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

bool is_marker(const std::string& cell, const std::vector<std::string>& markers) {
  return std::find(markers.begin(), markers.end(), cell) != markers.end();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return out;
}

Dataset parse_csv_text(const std::string& text, const Schema& schema, const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV: missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);

  auto header = split_csv_line(line);
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    header[i] = trim(header[i]);
    if (!position.emplace(header[i], i).second) {
      throw ParseError("duplicate header code '" + header[i] + "'", 1, header[i]);
    }
  }

  const auto features = schema.feature_columns();
  std::vector<std::size_t> feature_pos;
  for (const auto& col : features) {
    auto it = position.find(col.code);
    if (it == position.end()) throw ParseError("header is missing schema code '" + col.code + "'", 1, col.code);
    feature_pos.push_back(it->second);
  }
  std::optional<std::size_t> target_pos;
  if (auto it = position.find(schema.target_code()); it != position.end()) {
    target_pos = it->second;
  } else if (options.require_labels) {
    throw ParseError("header is missing target code '" + schema.target_code() + "'", 1,
                     schema.target_code());
  }
  for (const auto& code : header) {
    if (schema.find(code) == nullptr) spdlog::warn("ignoring CSV column '{}' not in schema", code);
  }

  Dataset ds;
  ds.columns = features;
  ds.target_code = schema.target_code();
  ds.values = Matrix(0, features.size());
  if (target_pos) ds.labels = std::vector<int>{};
  std::vector<double> row(features.size());
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    const std::size_t r = ds.values.rows();
    for (std::size_t j = 0; j < features.size(); ++j) {
      const std::string cell = trim(cells[feature_pos[j]]);
      const auto& col = features[j];
      if (is_marker(cell, options.missing_markers)) {
        row[j] = std::numeric_limits<double>::quiet_NaN();
        ds.missing.push_back(1);
        continue;
      }
      auto number = parse_number(cell);
      if (number && std::isfinite(*number)) {
        row[j] = *number;
      } else if (col.kind == ColumnKind::kOrdinal) {
        row[j] = std::numeric_limits<double>::quiet_NaN();
        ds.uncoded.emplace(std::make_pair(r, j), cell);
      } else {
        throw ParseError("unparseable value '" + cell + "'", line_no, col.code);
      }
      ds.missing.push_back(0);
    }
    if (target_pos) {
      const std::string cell = trim(cells[*target_pos]);
      int label = -1;
      if (auto number = parse_number(cell)) {
        if (schema.label_threshold()) {
          label = *number >= *schema.label_threshold() ? kContent : kDiscontent;
        } else if (*number == 0.0 || *number == 1.0) {
          label = static_cast<int>(*number);
        }
      } else if (lower(cell) == "content") {
        label = kContent;
      } else if (lower(cell) == "discontent") {
        label = kDiscontent;
      }
      if (label < 0) throw ParseError("unparseable label '" + cell + "'", line_no, schema.target_code());
      ds.labels->push_back(label);
    }
    ds.values.append_row(row);
    ds.row_ids.push_back(static_cast<std::uint64_t>(r));
  }
  ds.validate();
  return ds;
}

Dataset parse_csv(const std::string& path, const Schema& schema, const CsvOptions& options) {
  return parse_csv_text(read_file(path), schema, options);
}

Schema infer_schema(const std::string& path, const std::string& target_code,
                    std::optional<double> label_threshold) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV: missing header row");
  std::vector<ColumnMeta> cols;
  for (auto& code : split_csv_line(line)) {
    ColumnMeta c;
    c.code = trim(code);
    c.kind = c.code == target_code ? ColumnKind::kLabel : ColumnKind::kNumeric;
    cols.push_back(std::move(c));
  }
  return Schema(std::move(cols), target_code, label_threshold);
}

std::string write_csv_text(const Dataset& ds, const CsvOptions& options) {
  const std::string marker = options.missing_markers.empty() ? "" : options.missing_markers.front();
  std::string out;
  for (std::size_t j = 0; j < ds.cols(); ++j) {
    if (j) out += ',';
    out += quote_if_needed(ds.columns[j].code);
  }
  if (ds.labels) out += "," + quote_if_needed(ds.target_code);
  out += '\n';
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t j = 0; j < ds.cols(); ++j) {
      if (j) out += ',';
      if (ds.is_missing(r, j)) {
        out += marker;
      } else if (auto it = ds.uncoded.find({r, j}); it != ds.uncoded.end()) {
        out += quote_if_needed(it->second);
      } else {
        out += format_double(ds.values(r, j));
      }
    }
    if (ds.labels) out += "," + std::to_string((*ds.labels)[r]);
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& ds, const std::string& path, const CsvOptions& options) {
  write_file(path, write_csv_text(ds, options));
}

}  // namespace lifesat
