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

#include <cmath>
#include <set>

#include "../support/fixtures.hpp"
#include "lifesat/csv.hpp"
#include "lifesat/questionnaire.hpp"
#include "lifesat/synth.hpp"
#include "lifesat/table.hpp"

namespace lifesat {
namespace {

TEST(Common, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Common, RngIsDeterministicAndBounded) {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}

TEST(Common, ThresholdFormatting) {
  EXPECT_EQ(format_threshold(1.0), "1.0");
  EXPECT_EQ(format_threshold(2.5), "2.5");
  EXPECT_EQ(format_threshold(1.19), "1.19");
  EXPECT_EQ(format_threshold(1.194), "1.19");
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Common, ParallelForFillsEverySlot) {
  std::vector<int> out(257, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i) * 2);
}

Schema small_schema() {
  std::vector<ColumnMeta> cols(3);
  cols[0] = {"A2", "How would you rate your health generally?", ColumnKind::kOrdinal, {"Bad", "Average", "Good"}, "physical", {}, {}};
  cols[1] = {"age", "What is your age?", ColumnKind::kNumeric, {}, "physical", 16.0, 64.0};
  cols[2] = {"label", "", ColumnKind::kLabel, {}, "", {}, {}};
  return Schema(cols, "label");
}

TEST(Csv, HeaderOnlyGivesEmptyDataset) {
  const Dataset ds = parse_csv_text("A2,age,label\n", small_schema());
  EXPECT_EQ(ds.rows(), 0u);
  EXPECT_EQ(ds.cols(), 2u);
}

TEST(Csv, EmptyCellIsMaskedExactlyThere) {
  const Dataset ds = parse_csv_text("A2,age,label\nGood,30,1\nBad,,0\nAverage,41,1\n", small_schema());
  ASSERT_EQ(ds.rows(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(ds.is_missing(r, c), r == 1 && c == 1) << r << "," << c;
  }
  EXPECT_EQ((*ds.labels)[1], kDiscontent);
}

TEST(Csv, ColumnKeepsItsPrompt) {
  const Dataset ds = parse_csv_text("age,A2,label\n30,Good,1\n", small_schema());
  const auto c = ds.require_column("A2");
  EXPECT_EQ(ds.columns[c].prompt, "How would you rate your health generally?");
}

TEST(Csv, BadCellReportsRowAndColumn) {
  try {
    parse_csv_text("A2,age,label\nGood,thirty,1\n", small_schema());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2);  // file line, header is line 1
    EXPECT_EQ(e.column(), "age");
  }
}

TEST(Csv, MissingHeaderColumnFails) { EXPECT_THROW(parse_csv_text("A2,label\nGood,1\n", small_schema()), ParseError); }

TEST(Csv, DuplicateHeaderFails) {
  EXPECT_THROW(parse_csv_text("A2,age,age,label\nGood,1,1,1\n", small_schema()), ParseError);
}

TEST(Csv, LabelThresholdBinarizes) {
  auto cols = small_schema().columns();
  const Schema s(cols, "label", 6.0);
  const Dataset ds = parse_csv_text("A2,age,label\nGood,30,6\nBad,20,5.5\n", s);
  EXPECT_EQ((*ds.labels)[0], kContent);
  EXPECT_EQ((*ds.labels)[1], kDiscontent);
}

TEST(Csv, WriteThenParseRoundTrips) {
  const Dataset ds = fixtures::planted(20, 2, 1, 1.0, 3, 0.1);
  auto cols = ds.columns;
  cols.push_back({"label", "", ColumnKind::kLabel, {}, "", {}, {}});
  const Schema s(cols, "label");
  const Dataset back = parse_csv_text(write_csv_text(ds), s);
  EXPECT_EQ(back.missing, ds.missing);
  for (std::size_t i = 0; i < ds.values.data().size(); ++i) {
    if (!ds.missing[i]) {
      EXPECT_EQ(back.values.data()[i], ds.values.data()[i]);
    }
  }
  EXPECT_EQ(*back.labels, *ds.labels);
}

TEST(Split, EightyTwentyAndDeterministic) {
  const Dataset ds = fixtures::planted(100, 2, 2, 1.0, 1);
  const auto a = shuffle_split(ds, 0.8, 21);
  const auto b = shuffle_split(ds, 0.8, 21);
  EXPECT_EQ(a.train.rows(), 80u);
  EXPECT_EQ(a.test.rows(), 20u);
  EXPECT_EQ(a.train.row_ids, b.train.row_ids);
  std::set<std::uint64_t> all(a.train.row_ids.begin(), a.train.row_ids.end());
  for (auto id : a.test.row_ids) EXPECT_TRUE(all.insert(id).second);
  EXPECT_EQ(all.size(), 100u);
}

TEST(Split, RejectsTinyOrBadFraction) {
  const Dataset ds = fixtures::planted(10, 1, 0, 1.0, 1);
  EXPECT_THROW(shuffle_split(ds, 1.0, 1), InvalidArgument);
  EXPECT_THROW(shuffle_split(ds.subset_rows(std::vector<std::size_t>{0}), 0.5, 1), InvalidArgument);
}

TEST(Synth, ExactClassSizesAndMissingFraction) {
  const Dataset ds = fixtures::planted(1000, 3, 2, 0.25, 4, 0.1);
  const auto counts = class_counts(*ds.labels);
  EXPECT_EQ(counts[kDiscontent], 200u);
  EXPECT_EQ(counts[kContent], 800u);
  std::size_t gaps = 0;
  for (auto m : ds.missing) gaps += m;
  EXPECT_EQ(gaps, 500u);
}

TEST(Questionnaire, LifeWellSchemaHasTwentySevenItemsInFivePanels) {
  const Schema s = Schema::load(fixtures::config_path("lifewell_schema.json"));
  const auto q = build_questionnaire(s, lifewell_codes());
  ASSERT_EQ(q.items.size(), 27u);
  std::set<std::string> panels, codes;
  for (const auto& it : q.items) {
    panels.insert(it.category);
    codes.insert(it.code);
  }
  EXPECT_EQ(panels.size(), 5u);
  EXPECT_EQ(codes.size(), 27u);
  ASSERT_NE(q.find("A2"), nullptr);
  EXPECT_EQ(q.find("A2")->prompt, "How would you rate your health generally?");
  EXPECT_EQ(Questionnaire::from_json(q.to_json()), q);
}

TEST(Questionnaire, AnswerChecksNameTheItem) {
  const Schema s = Schema::load(fixtures::config_path("lifewell_schema.json"));
  const auto q = build_questionnaire(s, lifewell_codes());
  try {
    q.find("A2")->check_answer(9);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("A2"), std::string::npos);
  }
  EXPECT_NO_THROW(q.find("age")->check_answer(30));
  EXPECT_THROW(q.find("age")->check_answer(80), InvalidArgument);
}

}  // namespace
}  // namespace lifesat
