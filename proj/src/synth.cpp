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

#include "lifesat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lifesat {

namespace {

constexpr double kContinuousScale = 4.0;

double observed_value(const ColumnMeta& col, double u, int ordinal_levels, bool schema_driven) {
  if (col.kind == ColumnKind::kOrdinal) {
    const auto levels = static_cast<double>(col.categories.size());
    return std::min(std::floor(u * levels), levels - 1.0);
  }
  if (schema_driven) {
    const double lo = col.min_value.value_or(0.0);
    const double hi = col.max_value.value_or(kContinuousScale);
    return std::round(lo + u * (hi - lo));
  }
  if (ordinal_levels > 0) {
    return std::min(std::floor(u * ordinal_levels), static_cast<double>(ordinal_levels - 1));
  }
  return u * kContinuousScale;
}

Dataset generate(std::vector<ColumnMeta> columns, std::string target_code, const SynthSpec& spec,
                 bool schema_driven) {
  validate(spec);
  const auto [majority, minority] = synth_class_sizes(spec);
  const std::size_t n = spec.n_rows;
  const std::size_t d = columns.size();
  if (spec.n_informative > d) throw InvalidArgument("more informative columns than columns");

  Rng rng(spec.seed);
  Matrix values(n, d);
  std::vector<double> score(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double u = rng.uniform();
      if (c < spec.n_informative) score[r] += u;
      values(r, c) = observed_value(columns[c], u, spec.ordinal_levels, schema_driven);
    }
  }

  // Lowest latent scores form the minority (Discontent) class.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  std::vector<int> labels(n, kContent);
  for (std::size_t i = 0; i < minority; ++i) labels[order[i]] = kDiscontent;
  (void)majority;

  Dataset ds = make_dataset(std::move(columns), std::move(values), std::move(labels));
  ds.target_code = std::move(target_code);

  const auto total = n * d;
  const auto n_missing = static_cast<std::size_t>(std::llround(spec.missing_fraction * static_cast<double>(total)));
  if (n_missing > 0) {
    std::vector<std::size_t> cells(total);
    std::iota(cells.begin(), cells.end(), 0);
    for (std::size_t i = 0; i < n_missing; ++i) {
      std::swap(cells[i], cells[i + rng.below(total - i)]);
      ds.missing[cells[i]] = 1;
      ds.values.data()[cells[i]] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return ds;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (!(spec.class_imbalance_ratio > 0.0 && spec.class_imbalance_ratio <= 1.0)) {
    throw InvalidArgument("class_imbalance_ratio must lie in (0, 1]");
  }
  if (!(spec.missing_fraction >= 0.0 && spec.missing_fraction <= 1.0)) {
    throw InvalidArgument("missing_fraction must lie in [0, 1]");
  }
  if (spec.n_informative == 0) throw InvalidArgument("at least one informative column is required");
  if (spec.ordinal_levels == 1 || spec.ordinal_levels < 0) {
    throw InvalidArgument("ordinal_levels must be 0 or at least 2");
  }
  auto [majority, minority] = synth_class_sizes(spec);
  if (minority == 0 || majority == 0) {
    throw InvalidArgument("n_rows too small for the requested class imbalance");
  }
}

std::pair<std::size_t, std::size_t> synth_class_sizes(const SynthSpec& spec) {
  const double r = spec.class_imbalance_ratio;
  const auto minority = static_cast<std::size_t>(std::llround(static_cast<double>(spec.n_rows) * r / (1.0 + r)));
  return {spec.n_rows - std::min(minority, spec.n_rows), minority};
}

Dataset generate_synthetic(const SynthSpec& spec) {
  std::vector<ColumnMeta> columns;
  auto add = [&](const std::string& code) {
    ColumnMeta c;
    c.code = code;
    if (spec.ordinal_levels > 0) {
      c.kind = ColumnKind::kOrdinal;
      for (int k = 0; k < spec.ordinal_levels; ++k) c.categories.push_back("level" + std::to_string(k));
    }
    columns.push_back(std::move(c));
  };
  for (std::size_t i = 0; i < spec.n_informative; ++i) add("I" + std::to_string(i));
  for (std::size_t i = 0; i < spec.n_noise; ++i) add("N" + std::to_string(i));
  return generate(std::move(columns), "label", spec, false);
}

Dataset generate_for_schema(const Schema& schema, const SynthSpec& spec) {
  return generate(schema.feature_columns(), schema.target_code(), spec, true);
}

}  // namespace lifesat
