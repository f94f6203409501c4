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

#include "lifesat/artifact.hpp"

#include <algorithm>

namespace lifesat {

namespace {

constexpr std::string_view kMagic = "LIFESAT-ARTIFACT ";
constexpr std::string_view kSumTag = "sha256 ";

}  // namespace

VersionError::VersionError(int found, int expected)
    : Error("artifact format version " + std::to_string(found) + " is not supported; this build reads version " +
            std::to_string(expected)),
      found_(found),
      expected_(expected) {}

const Classifier& ModelArtifact::model(const std::string& name) const {
  const std::string& want = name.empty() ? primary : name;
  for (const auto& [n, m] : models) {
    if (n == want) return *m;
  }
  throw InvalidArgument("artifact has no model named " + want);
}

std::vector<std::string> ModelArtifact::model_codes() const {
  if (!pca) return input_codes;
  std::vector<std::string> out;
  for (std::size_t c = 0; c < pca->k; ++c) out.push_back("PC" + std::to_string(c + 1));
  return out;
}

Questionnaire ModelArtifact::questionnaire() const { return build_questionnaire(schema, input_codes); }

Matrix ModelArtifact::model_inputs(const Dataset& ds) const {
  const Dataset p = preprocessor.apply(ds);
  std::vector<std::size_t> idx;
  for (const auto& c : input_codes) idx.push_back(p.require_column(c));
  Matrix X = p.values.select_cols(idx);
  return pca ? pca->transform(X) : X;
}

std::vector<double> ModelArtifact::answers_to_inputs(const std::map<std::string, double>& answers) const {
  std::vector<ColumnMeta> cols;
  Matrix row(1, input_codes.size());
  for (std::size_t j = 0; j < input_codes.size(); ++j) {
    const auto it = answers.find(input_codes[j]);
    if (it == answers.end()) throw InvalidArgument("missing answer for " + input_codes[j]);
    ColumnMeta meta;
    meta.code = input_codes[j];
    cols.push_back(std::move(meta));
    row(0, j) = it->second;
  }
  const Dataset clamped = clamp_outliers(make_dataset(std::move(cols), std::move(row)), preprocessor.outlier_stats());
  Matrix X = clamped.values;
  if (pca) X = pca->transform(X);
  return {X.data().begin(), X.data().end()};
}

nlohmann::json ModelArtifact::payload() const {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& [n, m] : models) ms.push_back({{"name", n}, {"model", m->to_json()}});
  nlohmann::json doc = {{"schema", schema.to_json()},
                        {"preprocessor", preprocessor.to_json()},
                        {"selection", {{"mode", selection_mode}, {"input_codes", input_codes}}},
                        {"discretizer", discretizer.to_json()},
                        {"models", ms},
                        {"primary", primary},
                        {"config_fingerprint", config_fingerprint},
                        {"seed", seed}};
  if (pca) doc["selection"]["pca"] = pca->to_json();
  return doc;
}

ModelArtifact ModelArtifact::from_payload(const nlohmann::json& doc) {
  ModelArtifact a;
  try {
    a.schema = Schema::from_json(doc.at("schema"));
    a.preprocessor = FittedPreprocessor::from_json(doc.at("preprocessor"));
    const auto& sel = doc.at("selection");
    a.selection_mode = sel.at("mode").get<std::string>();
    a.input_codes = sel.at("input_codes").get<std::vector<std::string>>();
    if (sel.contains("pca")) a.pca = PcaModel::from_json(sel.at("pca"));
    a.discretizer = DiscretizerStats::from_json(doc.at("discretizer"));
    for (const auto& m : doc.at("models")) {
      a.models.emplace_back(m.at("name").get<std::string>(), model_from_json(m.at("model")));
    }
    a.primary = doc.at("primary").get<std::string>();
    a.config_fingerprint = doc.at("config_fingerprint").get<std::string>();
    a.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("artifact payload: ") + ex.what());
  }
  a.model();  // primary must exist
  return a;
}

std::string serialize_artifact(const ModelArtifact& artifact) {
  const std::string body = artifact.payload().dump();
  return std::string(kMagic) + std::to_string(artifact.version) + "\n" + std::string(kSumTag) + sha256_hex(body) +
         "\n" + body;
}

ModelArtifact parse_artifact(std::string_view bytes, std::string* checksum) {
  const auto nl1 = bytes.find('\n');
  if (nl1 == std::string_view::npos || !bytes.starts_with(kMagic)) throw ParseError("not a lifesat artifact");
  int version = 0;
  try {
    std::size_t used = 0;
    const std::string v(bytes.substr(kMagic.size(), nl1 - kMagic.size()));
    version = std::stoi(v, &used);
    if (used != v.size()) throw ParseError("bad artifact version '" + v + "'");
  } catch (const std::logic_error&) {
    throw ParseError("bad artifact version line");
  }
  if (version != kArtifactVersion) throw VersionError(version, kArtifactVersion);
  const auto nl2 = bytes.find('\n', nl1 + 1);
  if (nl2 == std::string_view::npos) throw ParseError("artifact checksum line missing");
  const auto sum_line = bytes.substr(nl1 + 1, nl2 - nl1 - 1);
  if (!sum_line.starts_with(kSumTag)) throw ParseError("artifact checksum line missing");
  const std::string expected(sum_line.substr(kSumTag.size()));
  const auto body = bytes.substr(nl2 + 1);
  if (sha256_hex(body) != expected) throw ParseError("artifact checksum mismatch (file corrupt or truncated)");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("artifact payload: ") + ex.what());
  }
  ModelArtifact a = ModelArtifact::from_payload(doc);
  a.version = version;
  if (checksum) *checksum = expected;
  return a;
}

void save_artifact(const ModelArtifact& artifact, const std::string& path) {
  write_file(path, serialize_artifact(artifact));
}

ModelArtifact load_artifact(const std::string& path, std::string* checksum) {
  return parse_artifact(read_file(path), checksum);
}

}  // namespace lifesat
