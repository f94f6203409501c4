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

#include "lifesat/questionnaire.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lifesat {

const std::vector<std::string>& questionnaire_categories() {
  static const std::vector<std::string> cats{"physical", "mental", "economic", "social", "cultural"};
  return cats;
}

const std::vector<std::string>& lifewell_codes() {
  static const std::vector<std::string> codes{
      "age", "A2",  "C1",  "E1",  "E2", "E5_a", "D2",  "D4",  "D6",  "D8",  "D11", "D10", "D15", "D16",
      "D17", "job", "F15", "M2", "M6", "M8",  "E17", "G1", "J2",  "J4",  "J17", "J9",  "J14"};
  return codes;
}

void QuestionItem::check_answer(double value) const {
  if (!std::isfinite(value)) throw InvalidArgument(code + ": answer must be a finite number");
  if (kind == ColumnKind::kOrdinal) {
    const bool ok = std::any_of(options.begin(), options.end(),
                                [&](const AnswerOption& o) { return static_cast<double>(o.value) == value; });
    if (!ok) {
      throw InvalidArgument(code + ": answer " + format_double(value) + " is not one of the " +
                            std::to_string(options.size()) + " options");
    }
    return;
  }
  if ((min_value && value < *min_value) || (max_value && value > *max_value)) {
    throw InvalidArgument(code + ": answer " + format_double(value) + " is outside the accepted range");
  }
}

const QuestionItem* Questionnaire::find(const std::string& code) const {
  for (const auto& item : items) {
    if (item.code == code) return &item;
  }
  return nullptr;
}

std::vector<std::string> Questionnaire::codes() const {
  std::vector<std::string> out;
  for (const auto& item : items) out.push_back(item.code);
  return out;
}

nlohmann::json Questionnaire::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& item : items) {
    nlohmann::json opts = nlohmann::json::array();
    for (const auto& o : item.options) opts.push_back({{"value", o.value}, {"label", o.label}});
    nlohmann::json j{{"code", item.code},
                     {"prompt", item.prompt},
                     {"category", item.category},
                     {"kind", to_string(item.kind)},
                     {"options", opts}};
    if (item.min_value) j["min"] = *item.min_value;
    if (item.max_value) j["max"] = *item.max_value;
    arr.push_back(std::move(j));
  }
  return {{"items", arr}, {"count", items.size()}};
}

Questionnaire Questionnaire::from_json(const nlohmann::json& doc) {
  Questionnaire q;
  std::set<std::string> seen;
  for (const auto& j : doc.at("items")) {
    QuestionItem item;
    item.code = j.at("code").get<std::string>();
    if (!seen.insert(item.code).second) throw ParseError("duplicate questionnaire code " + item.code);
    item.prompt = j.value("prompt", "");
    item.category = j.value("category", "uncategorized");
    item.kind = column_kind_from_string(j.value("kind", "ordinal"));
    for (const auto& o : j.value("options", nlohmann::json::array())) {
      item.options.push_back({o.at("value").get<int>(), o.at("label").get<std::string>()});
    }
    if (j.contains("min")) item.min_value = j.at("min").get<double>();
    if (j.contains("max")) item.max_value = j.at("max").get<double>();
    q.items.push_back(std::move(item));
  }
  return q;
}

Questionnaire build_questionnaire(const Schema& schema, std::span<const std::string> codes) {
  const std::set<std::string> wanted(codes.begin(), codes.end());
  for (const auto& c : wanted) {
    if (!schema.find(c)) throw InvalidArgument("questionnaire code " + c + " is not in the schema");
  }
  const auto& cats = questionnaire_categories();
  Questionnaire q;
  for (const auto& col : schema.columns()) {
    if (!wanted.count(col.code) || col.code == schema.target_code()) continue;
    QuestionItem item;
    item.code = col.code;
    item.prompt = col.prompt;
    item.kind = col.kind;
    item.category = std::find(cats.begin(), cats.end(), col.group) != cats.end() ? col.group : "uncategorized";
    for (std::size_t k = 0; k < col.categories.size(); ++k) {
      item.options.push_back({static_cast<int>(k), col.categories[k]});
    }
    item.min_value = col.min_value;
    item.max_value = col.max_value;
    q.items.push_back(std::move(item));
  }
  return q;
}

}  // namespace lifesat
