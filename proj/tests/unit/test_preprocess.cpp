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

#include "../support/fixtures.hpp"
#include "lifesat/preprocess.hpp"

namespace lifesat {
namespace {

// n rows of numeric columns; NaN marks a gap.
Dataset from_columns(const std::vector<std::vector<double>>& cols) {
  const std::size_t n = cols.front().size();
  Matrix m(n, cols.size());
  std::vector<std::uint8_t> miss(n * cols.size(), 0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      if (std::isnan(cols[c][r])) {
        miss[r * cols.size() + c] = 1;
      } else {
        m(r, c) = cols[c][r];
      }
    }
  }
  Dataset ds = make_dataset(numeric_columns(cols.size()), std::move(m), std::vector<int>(n, kContent));
  ds.missing = std::move(miss);
  return ds;
}

std::vector<double> with_gaps(std::size_t n, std::size_t gaps) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i < gaps ? std::nan("") : static_cast<double>(i % 3);
  return v;
}

TEST(DropHighNull, TwentyPercentIsKeptAboveIsDropped) {
  const Dataset ds = from_columns({with_gaps(10, 2), with_gaps(10, 3), with_gaps(10, 0)});
  const auto [kept, dropped] = drop_high_null(ds, 0.20);
  ASSERT_EQ(dropped.size(), 1u);
  EXPECT_EQ(dropped[0], "x1");
  EXPECT_EQ(kept.codes(), (std::vector<std::string>{"x0", "x2"}));
}

TEST(DropHighNull, JustOverBoundary) {
  // 201 of 1000 is 20.1%.
  const Dataset ds = from_columns({with_gaps(1000, 200), with_gaps(1000, 201)});
  const auto [kept, dropped] = drop_high_null(ds, 0.20);
  EXPECT_EQ(dropped, std::vector<std::string>{"x1"});
  EXPECT_EQ(kept.cols(), 1u);
}

TEST(ClampOutliers, HandComputedFixture) {
  std::vector<double> col(10, 0.0);
  col[9] = 10.0;
  const Dataset ds = from_columns({col});
  for (bool sample : {true, false}) {
    const auto stats = fit_outlier_stats(ds, sample);
    ASSERT_EQ(stats.size(), 1u);
    EXPECT_DOUBLE_EQ(stats[0].mean, 1.0);
    EXPECT_DOUBLE_EQ(stats[0].std, sample ? std::sqrt(10.0) : 3.0);
    EXPECT_EQ(stats[0].median, 0.0);
    const Dataset out = clamp_outliers(ds, stats);
    for (std::size_t r = 0; r < 10; ++r) EXPECT_EQ(out.values(r, 0), 0.0);
  }
}

TEST(ClampOutliers, InsideBandUntouched) {
  const Dataset ds = from_columns({{1, 2, 3, 4, 5}});
  const Dataset out = clamp_outliers(ds, fit_outlier_stats(ds));
  EXPECT_EQ(out.values, ds.values);
}

TEST(MedianOf, EvenAndOdd) {
  EXPECT_EQ(median_of({3, 1, 2}), 2.0);
  EXPECT_EQ(median_of({4, 1, 2, 3}), 2.5);
}

TEST(IterativeImpute, RecoversNoiselessLinearDependence) {
  Rng rng(11);
  const std::size_t n = 400;
  std::vector<double> a(n), b(n), truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform() * 10.0;
    truth[i] = 2.0 * a[i] + 1.0;
    b[i] = i % 10 == 0 ? std::nan("") : truth[i];
  }
  ImputeOptions opts;
  opts.round_ordinal = false;
  const auto [out, model] = iterative_impute(from_columns({a, b}), opts);
  EXPECT_FALSE(out.has_missing());
  for (std::size_t i = 0; i < n; i += 10) EXPECT_NEAR(out.values(i, 1), truth[i], 1e-2) << i;
  // Observed cells pass through.
  EXPECT_EQ(out.values(1, 1), truth[1]);
}

TEST(IterativeImpute, ReplayMatchesFit) {
  const Dataset ds = fixtures::planted(300, 3, 2, 0.5, 5, 0.1);
  const auto [out, model] = iterative_impute(ds);
  const Dataset replay = model.apply(ds);
  EXPECT_FALSE(replay.has_missing());
  EXPECT_EQ(model.apply(ds).values, replay.values);
  EXPECT_EQ(ImputationModel::from_json(model.to_json()).apply(ds).values, replay.values);
  for (std::size_t i = 0; i < ds.missing.size(); ++i) {
    if (!ds.missing[i]) {
      EXPECT_EQ(replay.values.data()[i], ds.values.data()[i]);
    }
  }
}

TEST(Preprocessor, ChainLeavesNoGapsOnTrainOrHeldOut) {
  const Dataset ds = fixtures::planted(600, 4, 4, 0.3, 8, 0.08);
  const auto split = shuffle_split(ds, 0.8, 3);
  const auto [pre, train] = FittedPreprocessor::fit(split.train);
  EXPECT_FALSE(train.has_missing());
  const Dataset test = pre.apply(split.test);
  EXPECT_FALSE(test.has_missing());
  EXPECT_EQ(test.codes(), pre.output_codes());
  EXPECT_EQ(FittedPreprocessor::from_json(pre.to_json()).apply(split.test).values, test.values);
}

TEST(Preprocessor, ZeroVarianceColumnIsDropped) {
  const Dataset ds = from_columns({{1, 2, 3, 4, 5, 6}, {7, 7, 7, 7, 7, 7}});
  const auto [pre, out] = FittedPreprocessor::fit(ds);
  EXPECT_EQ(pre.dropped_zero_variance(), std::vector<std::string>{"x1"});
  EXPECT_EQ(out.cols(), 1u);
}

TEST(Encoder, CategoryPositionsAndUnseen) {
  const OrdinalEncoder enc("A2", {"Bad", "Average", "Good"});
  EXPECT_EQ(enc.encode("Bad"), 0);
  EXPECT_EQ(enc.encode("Good"), 2);
  EXPECT_EQ(enc.encode("Great"), -1);
  EXPECT_EQ(enc.decode(1), "Average");
}

}  // namespace
}  // namespace lifesat
