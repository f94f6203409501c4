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

#include <set>

#include "../support/fixtures.hpp"
#include "lifesat/questionnaire.hpp"
#include "lifesat/textgen.hpp"

namespace lifesat {
namespace {

struct LifeWell {
  Schema schema = Schema::load(fixtures::config_path("lifewell_schema.json"));
  MappingTable table = MappingTable::load(fixtures::config_path("lifewell_mapping.json"));
  Questionnaire questionnaire = build_questionnaire(schema, lifewell_codes());

  Dataset rows(std::size_t n, std::uint64_t seed) const {
    SynthSpec spec;
    spec.n_rows = n;
    spec.n_informative = 6;
    spec.n_noise = 0;
    spec.seed = seed;
    return generate_for_schema(schema, spec);
  }
};

TEST(Textgen, TwentySevenChunksPerSentence) {
  const LifeWell lw;
  ASSERT_TRUE(validate_mapping(lw.table, lw.questionnaire).empty());
  const Dataset ds = lw.rows(50, 1);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const auto rec = render_sentence(ds, r, lw.table);
    const auto chunks = split_chunks(rec.sentence, lw.table);
    ASSERT_EQ(chunks.size(), 27u);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const auto& e = lw.table.entries[i];
      EXPECT_EQ(chunks[i], e.render(ds.values(r, ds.require_column(e.code))));
    }
  }
}

TEST(Textgen, HealthItemRendersAndInverts) {
  const LifeWell lw;
  const auto* a2 = lw.table.find("A2");
  ASSERT_NE(a2, nullptr);
  EXPECT_EQ(a2->render(2), "They rate their general health as good.");
  EXPECT_EQ(a2->value_of("very good"), 3);
  EXPECT_FALSE(a2->value_of("superb").has_value());
  for (const auto& [v, phrase] : a2->phrases) EXPECT_EQ(a2->value_of(a2->phrase(v)), v);
  EXPECT_EQ(lw.table.find("age")->render(24), "They are 24 years old.");
}

TEST(Textgen, ExportImportRoundTripIsByteExact) {
  const LifeWell lw;
  const Dataset ds = lw.rows(40, 2);
  fixtures::TempDir dir("textgen");
  const auto path = dir.file("records.jsonl");
  EXPECT_EQ(export_text(ds, lw.table, path), 40u);
  const auto records = import_text(path);
  EXPECT_EQ(records, render_all(ds, lw.table));
  std::string again;
  for (const auto& r : records) again += r.to_json().dump() + "\n";
  EXPECT_EQ(again, read_file(path));
  const auto path2 = dir.file("again.jsonl");
  export_text(ds, lw.table, path2);
  EXPECT_EQ(read_file(path2), read_file(path));
}

TEST(Textgen, EmptyDatasetExportsNothing) {
  const LifeWell lw;
  const Dataset ds = lw.rows(40, 3).subset_rows(std::vector<std::size_t>{});
  fixtures::TempDir dir("textgen_empty");
  EXPECT_EQ(export_text(ds, lw.table, dir.file("e.jsonl")), 0u);
  EXPECT_EQ(read_file(dir.file("e.jsonl")), "");
  EXPECT_TRUE(import_text(dir.file("e.jsonl")).empty());
}

TEST(Textgen, ValidationCatchesInjectedGaps) {
  const LifeWell lw;
  auto kinds_of = [&](const MappingTable& t) {
    std::set<std::string> k;
    for (const auto& issue : validate_mapping(t, lw.questionnaire)) k.insert(issue.kind + ":" + issue.code);
    return k;
  };

  MappingTable dropped = lw.table;
  dropped.entries.erase(dropped.entries.begin() + 1);
  EXPECT_TRUE(kinds_of(dropped).count("missing_code:A2"));

  MappingTable uncovered = lw.table;
  for (auto& e : uncovered.entries)
    if (e.code == "A2") e.phrases.erase(3);
  const auto issues = validate_mapping(uncovered, lw.questionnaire);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].kind, "uncovered_value");
  EXPECT_EQ(issues[0].value, 3);

  MappingTable dup = lw.table;
  dup.entries[2].tmpl = dup.entries[1].tmpl;
  EXPECT_FALSE(kinds_of(dup).empty());

  MappingTable bad = lw.table;
  bad.entries[0].tmpl = "No slot here.";
  EXPECT_TRUE(kinds_of(bad).count("bad_template:age"));
}

TEST(Textgen, MissingCellIsRejected) {
  const LifeWell lw;
  Dataset ds = lw.rows(5, 4);
  ds.missing[ds.require_column("A2")] = 1;
  EXPECT_THROW(render_sentence(ds, 0, lw.table), InvalidArgument);
}

TEST(Textgen, MappingJsonRoundTrip) {
  const LifeWell lw;
  EXPECT_EQ(MappingTable::from_json(lw.table.to_json()).to_json(), lw.table.to_json());
}

}  // namespace
}  // namespace lifesat
