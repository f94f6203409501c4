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

#ifndef LIFESAT_QUESTIONNAIRE_HPP_
#define LIFESAT_QUESTIONNAIRE_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lifesat/table.hpp"

namespace lifesat {

// Panels of the questionnaire, in display order.
const std::vector<std::string>& questionnaire_categories();

// The 27 LifeWell item codes in questionnaire order.
const std::vector<std::string>& lifewell_codes();

struct AnswerOption {
  int value = 0;
  std::string label;

  bool operator==(const AnswerOption&) const = default;
};

struct QuestionItem {
  std::string code;
  std::string prompt;
  std::string category;
  ColumnKind kind = ColumnKind::kOrdinal;
  // Ordinal items: one option per category, value = encoded code.
  std::vector<AnswerOption> options;
  // Numeric items: accepted answer range.
  std::optional<double> min_value;
  std::optional<double> max_value;

  // Throws InvalidArgument naming the item when `value` is not an accepted answer.
  void check_answer(double value) const;

  bool operator==(const QuestionItem&) const = default;
};

struct Questionnaire {
  std::vector<QuestionItem> items;

  const QuestionItem* find(const std::string& code) const;
  std::vector<std::string> codes() const;

  nlohmann::json to_json() const;
  static Questionnaire from_json(const nlohmann::json& doc);

  bool operator==(const Questionnaire&) const = default;
};

// Items for `codes`, in schema column order. Items whose group is not one of
// the known panels are filed under "uncategorized".
Questionnaire build_questionnaire(const Schema& schema, std::span<const std::string> codes);

}  // namespace lifesat

#endif  // LIFESAT_QUESTIONNAIRE_HPP_
