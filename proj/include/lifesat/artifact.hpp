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

#ifndef LIFESAT_ARTIFACT_HPP_
#define LIFESAT_ARTIFACT_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lifesat/explain.hpp"
#include "lifesat/learners.hpp"
#include "lifesat/preprocess.hpp"
#include "lifesat/questionnaire.hpp"
#include "lifesat/selection.hpp"
#include "lifesat/table.hpp"

namespace lifesat {

inline constexpr int kArtifactVersion = 1;

// Thrown when a file was written by a different format version.
class VersionError : public Error {
 public:
  VersionError(int found, int expected);
  int found() const { return found_; }
  int expected() const { return expected_; }

 private:
  int found_;
  int expected_;
};

struct ModelArtifact {
  int version = kArtifactVersion;
  Schema schema;
  FittedPreprocessor preprocessor;
  // rfecv, none, pca95 or pca90.
  std::string selection_mode = "none";
  // Preprocessed columns the models (or the PCA) read, in order.
  std::vector<std::string> input_codes;
  std::optional<PcaModel> pca;
  // Fitted on training rows in model-input space.
  DiscretizerStats discretizer;
  std::vector<std::pair<std::string, ModelPtr>> models;
  // Model that answers predictions.
  std::string primary;
  std::string config_fingerprint;
  std::uint64_t seed = 0;

  const Classifier& model(const std::string& name = {}) const;
  // Column codes of the matrix the models consume.
  std::vector<std::string> model_codes() const;
  Questionnaire questionnaire() const;

  // Raw or preprocessed rows to model inputs.
  Matrix model_inputs(const Dataset& ds) const;
  // One encoded answer per input code; applies outlier clamping and any
  // projection. Throws InvalidArgument for absent codes.
  std::vector<double> answers_to_inputs(const std::map<std::string, double>& answers) const;

  nlohmann::json payload() const;
  static ModelArtifact from_payload(const nlohmann::json& doc);
};

// Header line, checksum line, JSON payload.
std::string serialize_artifact(const ModelArtifact& artifact);
ModelArtifact parse_artifact(std::string_view bytes, std::string* checksum = nullptr);

void save_artifact(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact(const std::string& path, std::string* checksum = nullptr);

}  // namespace lifesat

#endif  // LIFESAT_ARTIFACT_HPP_
