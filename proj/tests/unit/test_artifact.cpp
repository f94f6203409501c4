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

#include <gtest/gtest.h>

#include <numeric>

#include "../support/fixtures.hpp"
#include "lifesat/artifact.hpp"
#include "lifesat/pipeline.hpp"

namespace lifesat {
namespace {

PipelineConfig small_config(const std::string& selection) {
  return PipelineConfig::from_json({
      {"data", {{"synthetic", {{"n_rows", 300}, {"n_informative", 3}, {"n_noise", 3}, {"class_imbalance_ratio", 0.4},
                               {"missing_fraction", 0.03}, {"seed", 5}}}}},
      {"seeds", {21}},
      {"selection", {{"mode", selection}}},
      {"models",
       {{{"name", "LR"}, {"kind", "logistic_regression"}},
        {{"name", "DT"}, {"kind", "decision_tree"}, {"params", {{"max_depth", 4}}}}}},
      {"ensemble", {{"members", {"LR", "DT"}}}},
      {"explain", {{"n_samples", 200}}},
  });
}

const ModelArtifact& trained(const std::string& selection) {
  static std::map<std::string, ModelArtifact> cache;
  auto it = cache.find(selection);
  if (it == cache.end()) it = cache.emplace(selection, run_training(small_config(selection)).best_artifact()).first;
  return it->second;
}

TEST(Artifact, RoundTripKeepsEveryPrediction) {
  for (const char* mode : {"none", "pca95"}) {
    const ModelArtifact& a = trained(mode);
    const auto [schema, data] = load_data(small_config(mode));
    std::vector<std::size_t> first(100);
    std::iota(first.begin(), first.end(), 0);
    const Dataset rows = data.subset_rows(first);
    const std::string bytes = serialize_artifact(a);
    std::string sum;
    const ModelArtifact b = parse_artifact(bytes, &sum);
    EXPECT_EQ(sum, sha256_hex(bytes.substr(bytes.find('\n', bytes.find('\n') + 1) + 1)));
    const Matrix xa = a.model_inputs(rows);
    EXPECT_EQ(b.model_inputs(rows), xa);
    for (const auto& [name, model] : a.models) {
      EXPECT_EQ(b.model(name).predict_proba(xa), model->predict_proba(xa)) << mode << " " << name;
    }
    EXPECT_EQ(serialize_artifact(b), bytes);
    EXPECT_EQ(b.questionnaire(), a.questionnaire());
  }
}

TEST(Artifact, SaveLoadThroughFile) {
  const ModelArtifact& a = trained("none");
  fixtures::TempDir dir("artifact");
  save_artifact(a, dir.file("m.artifact"));
  std::string sum;
  const auto b = load_artifact(dir.file("m.artifact"), &sum);
  EXPECT_EQ(serialize_artifact(b), read_file(dir.file("m.artifact")));
  EXPECT_EQ(sum.size(), 64u);
  EXPECT_THROW(load_artifact(dir.file("absent.artifact")), IoError);
}

TEST(Artifact, TruncatedOrCorruptFileIsRejected) {
  const std::string bytes = serialize_artifact(trained("none"));
  try {
    parse_artifact(bytes.substr(0, bytes.size() / 2));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
  std::string flipped = bytes;
  flipped[flipped.size() - 10] ^= 1;
  EXPECT_THROW(parse_artifact(flipped), ParseError);
  EXPECT_THROW(parse_artifact("hello"), ParseError);
}

TEST(Artifact, VersionMismatchNamesBothVersions) {
  std::string bytes = serialize_artifact(trained("none"));
  bytes.replace(0, bytes.find('\n'), "LIFESAT-ARTIFACT 7");
  try {
    parse_artifact(bytes);
    FAIL();
  } catch (const VersionError& e) {
    EXPECT_EQ(e.found(), 7);
    EXPECT_EQ(e.expected(), kArtifactVersion);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("7"), std::string::npos);
    EXPECT_NE(msg.find(std::to_string(kArtifactVersion)), std::string::npos);
  }
}

TEST(Artifact, AnswersMapMatchesDatasetPath) {
  const ModelArtifact& a = trained("pca95");
  const auto [schema, data] = load_data(small_config("pca95"));
  Dataset one = data.subset_rows(std::vector<std::size_t>{7});
  one.missing.assign(one.missing.size(), 0);
  std::map<std::string, double> answers;
  for (std::size_t c = 0; c < one.cols(); ++c) answers[one.columns[c].code] = one.values(0, c);
  const auto via_map = a.answers_to_inputs(answers);
  const Matrix via_ds = a.model_inputs(one);
  ASSERT_EQ(via_map.size(), via_ds.cols());
  for (std::size_t j = 0; j < via_map.size(); ++j) EXPECT_NEAR(via_map[j], via_ds(0, j), 1e-12);
  answers.erase(answers.begin());
  EXPECT_THROW(a.answers_to_inputs(answers), InvalidArgument);
}

}  // namespace
}  // namespace lifesat
