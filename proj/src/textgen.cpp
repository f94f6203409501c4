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

#include "lifesat/textgen.hpp"

#include <cmath>
#include <sstream>

namespace lifesat {

namespace {

constexpr std::string_view kSlot = "{}";

std::size_t slot_count(const std::string& t) {
  std::size_t n = 0;
  for (auto pos = t.find(kSlot); pos != std::string::npos; pos = t.find(kSlot, pos + kSlot.size())) ++n;
  return n;
}

int label_from_text(const std::string& s) {
  if (s == class_name(kContent)) return kContent;
  if (s == class_name(kDiscontent)) return kDiscontent;
  throw ParseError("unknown label '" + s + "'");
}

}  // namespace

std::string MappingEntry::phrase(double value) const {
  if (numeric()) {
    const double r = std::round(value);
    return std::abs(value - r) < 1e-9 ? format_double(r) : format_threshold(value, 2);
  }
  const double r = std::round(value);
  if (std::abs(value - r) > 1e-9) throw InvalidArgument(code + " value " + format_double(value) + " is not a code");
  const auto it = phrases.find(static_cast<int>(r));
  if (it == phrases.end()) {
    throw InvalidArgument(code + " value " + format_double(value) + " has no phrase");
  }
  return it->second;
}

std::optional<int> MappingEntry::value_of(const std::string& p) const {
  for (const auto& [v, text] : phrases) {
    if (text == p) return v;
  }
  return std::nullopt;
}

std::string MappingEntry::render(double value) const {
  std::string out = tmpl;
  const auto pos = out.find(kSlot);
  if (pos == std::string::npos) throw InvalidArgument("template for " + code + " has no slot");
  out.replace(pos, kSlot.size(), phrase(value));
  return out;
}

const MappingEntry* MappingTable::find(const std::string& code) const {
  for (const auto& e : entries) {
    if (e.code == code) return &e;
  }
  return nullptr;
}

nlohmann::json MappingTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json ph = nlohmann::json::object();
    for (const auto& [v, text] : e.phrases) ph[std::to_string(v)] = text;
    arr.push_back({{"code", e.code}, {"template", e.tmpl}, {"phrases", ph}});
  }
  return {{"entries", arr}};
}

MappingTable MappingTable::from_json(const nlohmann::json& doc) {
  MappingTable t;
  try {
    for (const auto& j : doc.at("entries")) {
      MappingEntry e;
      e.code = j.at("code").get<std::string>();
      e.tmpl = j.at("template").get<std::string>();
      if (j.contains("phrases")) {
        for (const auto& [k, v] : j.at("phrases").items()) {
          std::size_t used = 0;
          const int key = std::stoi(k, &used);
          if (used != k.size()) throw ParseError("phrase key '" + k + "' for " + e.code + " is not an integer");
          e.phrases[key] = v.get<std::string>();
        }
      }
      t.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("mapping table: ") + ex.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("mapping table: non-integer phrase key");
  }
  return t;
}

MappingTable MappingTable::load(const std::string& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

std::vector<MappingIssue> validate_mapping(const MappingTable& table, const Questionnaire& questionnaire) {
  std::vector<MappingIssue> issues;
  std::map<std::string, std::string> seen_templates;
  for (const auto& e : table.entries) {
    if (slot_count(e.tmpl) != 1) {
      issues.push_back({"bad_template", e.code, std::nullopt, "template for " + e.code + " needs exactly one {}"});
    }
    const auto [it, fresh] = seen_templates.emplace(e.tmpl, e.code);
    if (!fresh) {
      issues.push_back({"duplicate_template", e.code, std::nullopt,
                        "template for " + e.code + " repeats the one for " + it->second});
    }
  }
  for (const auto& item : questionnaire.items) {
    const auto* e = table.find(item.code);
    if (!e) {
      issues.push_back({"missing_code", item.code, std::nullopt, "no mapping for " + item.code});
      continue;
    }
    if (item.kind != ColumnKind::kOrdinal) continue;
    for (const auto& opt : item.options) {
      if (!e->phrases.contains(opt.value)) {
        issues.push_back({"uncovered_value", item.code, opt.value,
                          "no phrase for " + item.code + " = " + std::to_string(opt.value)});
      }
    }
  }
  return issues;
}

nlohmann::json TextRecord::to_json() const {
  return {{"row_id", row_id}, {"sentence", sentence}, {"label", class_name(label)}};
}

std::vector<std::string> split_chunks(const std::string& sentence, const MappingTable& table) {
  // Chunks are joined by single spaces but may contain spaces themselves, so
  // walk the templates: each chunk starts with its template's fixed prefix.
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    std::size_t end = sentence.size();
    if (i + 1 < table.entries.size()) {
      const auto& next = table.entries[i + 1].tmpl;
      const std::string prefix = " " + next.substr(0, next.find(kSlot));
      end = sentence.find(prefix, pos);
      if (end == std::string::npos) throw ParseError("sentence does not match the mapping table");
    }
    out.push_back(sentence.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

TextRecord render_sentence(const Dataset& ds, std::size_t row, const MappingTable& table) {
  if (row >= ds.rows()) throw InvalidArgument("row out of range");
  if (table.entries.empty()) throw InvalidArgument("mapping table is empty");
  std::string sentence;
  for (const auto& e : table.entries) {
    const std::size_t c = ds.require_column(e.code);
    if (ds.is_missing(row, c)) throw InvalidArgument(e.code + " is missing in row " + std::to_string(row));
    if (!sentence.empty()) sentence += ' ';
    sentence += e.render(ds.values(row, c));
  }
  TextRecord rec;
  rec.row_id = ds.row_ids.empty() ? row : ds.row_ids[row];
  rec.sentence = std::move(sentence);
  if (ds.labels) rec.label = (*ds.labels)[row];
  return rec;
}

std::vector<TextRecord> render_all(const Dataset& ds, const MappingTable& table) {
  std::vector<TextRecord> out(ds.rows());
  parallel_for(ds.rows(), [&](std::size_t r) { out[r] = render_sentence(ds, r, table); });
  return out;
}

std::size_t export_text(const Dataset& ds, const MappingTable& table, const std::string& path) {
  if (!ds.labels) throw InvalidArgument("text export needs labels");
  const auto records = render_all(ds, table);
  std::string body;
  for (const auto& r : records) body += r.to_json().dump() + "\n";
  write_file(path, body);
  return records.size();
}

std::vector<TextRecord> import_text(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<TextRecord> out;
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TextRecord r;
      r.row_id = j.at("row_id").get<std::uint64_t>();
      r.sentence = j.at("sentence").get<std::string>();
      r.label = label_from_text(j.at("label").get<std::string>());
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(std::string("text record: ") + ex.what(), n);
    }
  }
  return out;
}

}  // namespace lifesat
