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

#ifndef LIFESAT_TEXTGEN_HPP_
#define LIFESAT_TEXTGEN_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lifesat/questionnaire.hpp"
#include "lifesat/table.hpp"

namespace lifesat {

struct MappingEntry {
  std::string code;
  // Sentence chunk with a single "{}" slot.
  std::string tmpl;
  // Encoded value -> phrase. Empty for numeric items, which print the number.
  std::map<int, std::string> phrases;

  bool numeric() const { return phrases.empty(); }
  std::string phrase(double value) const;
  std::optional<int> value_of(const std::string& phrase) const;
  std::string render(double value) const;
};

struct MappingTable {
  // Rendering order.
  std::vector<MappingEntry> entries;

  const MappingEntry* find(const std::string& code) const;
  nlohmann::json to_json() const;
  static MappingTable from_json(const nlohmann::json& doc);
  static MappingTable load(const std::string& path);
};

struct MappingIssue {
  std::string kind;  // missing_code, uncovered_value, duplicate_template, bad_template
  std::string code;
  std::optional<int> value;
  std::string message;
};

// Empty result means the table is usable with `questionnaire`.
std::vector<MappingIssue> validate_mapping(const MappingTable& table, const Questionnaire& questionnaire);

struct TextRecord {
  std::uint64_t row_id = 0;
  std::string sentence;
  int label = kDiscontent;

  nlohmann::json to_json() const;
  bool operator==(const TextRecord&) const = default;
};

// Splits a rendered sentence back into its chunks, one per entry.
std::vector<std::string> split_chunks(const std::string& sentence, const MappingTable& table);

TextRecord render_sentence(const Dataset& ds, std::size_t row, const MappingTable& table);

std::vector<TextRecord> render_all(const Dataset& ds, const MappingTable& table);

// One JSON object per line. Returns the record count.
std::size_t export_text(const Dataset& ds, const MappingTable& table, const std::string& path);

std::vector<TextRecord> import_text(const std::string& path);

}  // namespace lifesat

#endif  // LIFESAT_TEXTGEN_HPP_
