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

#include <sys/wait.h>

#include <cstdlib>
#include <algorithm>
#include <filesystem>

#include "../support/fixtures.hpp"
#include "lifesat/common.hpp"

namespace lifesat {
namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args, const fixtures::TempDir& dir) {
  const std::string log = dir.file("cli.log");
  const std::string cmd = std::string(LIFESAT_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = read_file(log);
  return o;
}

TEST(Cli, TrainWritesReportsAndArtifact) {
  fixtures::TempDir dir("cli_train");
  const auto r = run_cli("-q train -c " + fixtures::config_path("lifewell_demo.json") + " -o " + dir.file("out"), dir);
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"report.json", "report.csv", "error_analysis.csv", "audit.json", "questionnaire.json",
                        "model.artifact"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.file("out/" + std::string(f)))) << f;
  }
  EXPECT_NE(r.out.find("Ensemble"), std::string::npos);

  // Explain one respondent given inline.
  const auto q = nlohmann::json::parse(read_file(dir.file("out/questionnaire.json")));
  nlohmann::json answers = nlohmann::json::object();
  for (const auto& item : q["items"]) {
    answers[item["code"].get<std::string>()] =
        item["kind"] == "numeric" ? item["min"].get<double>() : item["options"].back()["value"].get<double>();
  }
  write_file(dir.file("answers.json"), nlohmann::json{{"answers", answers}}.dump());
  const auto ex = run_cli("-q explain -a " + dir.file("out/model.artifact") + " -r " + dir.file("answers.json") +
                              " -n 300 --json",
                          dir);
  ASSERT_EQ(ex.code, 0) << ex.out;
  const auto doc = nlohmann::json::parse(ex.out);
  const double p0 = doc["probabilities"]["Discontent"], p1 = doc["probabilities"]["Content"];
  EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
  EXPECT_EQ(doc["explained_class"], p1 >= p0 ? "Content" : "Discontent");
  EXPECT_EQ(doc["contributions"].size(), 27u);

  const auto text = run_cli("-q explain -a " + dir.file("out/model.artifact") + " -r " + dir.file("answers.json") +
                                " -n 300",
                            dir);
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("prediction:"), std::string::npos);

  const auto partial = run_cli("-q explain -a " + dir.file("out/model.artifact") + " -r A2=1", dir);
  EXPECT_EQ(partial.code, 1);
  EXPECT_NE(partial.out.find("missing answer"), std::string::npos);
}

TEST(Cli, TextgenExportsOneLinePerRow) {
  fixtures::TempDir dir("cli_text");
  const auto r = run_cli("-q textgen -c " + fixtures::config_path("lifewell_demo.json") + " -m " +
                             fixtures::config_path("lifewell_mapping.json") + " -o " + dir.file("text.jsonl"),
                         dir);
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string text = read_file(dir.file("text.jsonl"));
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 1500u);
}

TEST(Cli, UsageErrorsExitNonZero) {
  fixtures::TempDir dir("cli_usage");
  const auto unknown = run_cli("frobnicate", dir);
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.out.find("train"), std::string::npos);
  EXPECT_EQ(run_cli("train", dir).code, 2);
  EXPECT_EQ(run_cli("-q train -c " + dir.file("missing.json"), dir).code, 2);
  write_file(dir.file("broken.json"), "{\"models\": 3}");
  EXPECT_EQ(run_cli("-q train -c " + dir.file("broken.json"), dir).code, 1);
  const auto help = run_cli("--help", dir);
  EXPECT_EQ(help.code, 0);
}

}  // namespace
}  // namespace lifesat
