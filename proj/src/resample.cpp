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

#include "lifesat/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <spdlog/spdlog.h>

namespace lifesat {

namespace {

struct ClassRoles {
  int minority = kDiscontent;
  std::vector<std::size_t> minority_rows;
  std::vector<std::size_t> majority_rows;
};

ClassRoles roles(const Dataset& ds) {
  if (!ds.labels) throw InvalidArgument("resampling needs labels");
  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const int y = (*ds.labels)[r];
    if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
    by_class[y].push_back(r);
  }
  if (by_class[0].empty() || by_class[1].empty()) throw DegenerateInput("resampling needs both classes present");
  ClassRoles out;
  // Equal counts: class 0 plays the minority.
  out.minority = by_class[0].size() <= by_class[1].size() ? 0 : 1;
  out.minority_rows = std::move(by_class[out.minority]);
  out.majority_rows = std::move(by_class[1 - out.minority]);
  return out;
}

}  // namespace

void validate(const ResamplePlan& plan) {
  if (!(plan.smote_target_ratio > 0.0 && plan.smote_target_ratio <= 1.0)) {
    throw InvalidArgument("smote_target_ratio must lie in (0, 1]");
  }
  if (plan.smote_k < 1) throw InvalidArgument("smote_k must be at least 1");
}

std::string to_string(ResampleMode mode) {
  switch (mode) {
    case ResampleMode::kNone: return "none";
    case ResampleMode::kOverOnly: return "over_only";
    case ResampleMode::kUnderOnly: return "under_only";
    case ResampleMode::kDual: return "dual";
  }
  return "none";
}

ResampleMode resample_mode_from_string(const std::string& text) {
  for (auto m : {ResampleMode::kNone, ResampleMode::kOverOnly, ResampleMode::kUnderOnly, ResampleMode::kDual}) {
    if (to_string(m) == text) return m;
  }
  throw InvalidArgument("unknown resample mode '" + text + "'");
}

Dataset smote_oversample(const Dataset& ds, const ResamplePlan& plan,
                         std::vector<std::pair<std::size_t, std::size_t>>* parents) {
  validate(plan);
  if (ds.has_missing()) throw InvalidArgument("SMOTE needs complete rows");
  const ClassRoles cr = roles(ds);
  if (parents) parents->clear();
  const std::size_t m = cr.minority_rows.size();
  if (m < 2) throw DegenerateInput("SMOTE needs at least 2 minority rows");
  const auto target = static_cast<std::size_t>(
      std::ceil(plan.smote_target_ratio * static_cast<double>(cr.majority_rows.size()) - 1e-9));
  if (m >= target) return ds;

  std::size_t k = static_cast<std::size_t>(plan.smote_k);
  if (m <= k) {
    spdlog::warn("SMOTE: {} minority rows, reducing k from {} to {}", m, k, m - 1);
    k = m - 1;
  }

  const std::size_t d = ds.cols();
  std::vector<std::optional<std::vector<std::size_t>>> neighbours(m);
  auto nearest = [&](std::size_t i) -> const std::vector<std::size_t>& {
    if (!neighbours[i]) {
      const auto xi = ds.values.row(cr.minority_rows[i]);
      std::vector<std::pair<double, std::size_t>> dist;
      dist.reserve(m - 1);
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const auto xj = ds.values.row(cr.minority_rows[j]);
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += (xi[c] - xj[c]) * (xi[c] - xj[c]);
        dist.emplace_back(s, j);
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
      std::vector<std::size_t> idx(k);
      for (std::size_t a = 0; a < k; ++a) idx[a] = dist[a].second;
      neighbours[i] = std::move(idx);
    }
    return *neighbours[i];
  };

  Dataset out = ds;
  Rng rng(plan.seed);
  std::vector<double> row(d);
  std::uint64_t next_id = 0;
  for (std::size_t made = m; made < target; ++made) {
    const std::size_t base = rng.below(m);
    const std::size_t nb = nearest(base)[rng.below(k)];
    const double u = rng.uniform();
    const auto x = ds.values.row(cr.minority_rows[base]);
    const auto y = ds.values.row(cr.minority_rows[nb]);
    for (std::size_t c = 0; c < d; ++c) {
      row[c] = x[c] + u * (y[c] - x[c]);
      if (plan.round_synthetic) row[c] = std::round(row[c]);
    }
    out.values.append_row(row);
    out.missing.insert(out.missing.end(), d, 0);
    out.labels->push_back(cr.minority);
    out.row_ids.push_back(kSyntheticRowBit | next_id++);
    if (parents) parents->emplace_back(cr.minority_rows[base], cr.minority_rows[nb]);
  }
  return out;
}

Dataset random_undersample(const Dataset& ds, std::uint64_t seed) {
  ClassRoles cr = roles(ds);
  const std::size_t keep = cr.minority_rows.size();
  if (cr.majority_rows.size() == keep) return ds;
  Rng rng(seed);
  auto& maj = cr.majority_rows;
  for (std::size_t i = 0; i < keep; ++i) std::swap(maj[i], maj[i + rng.below(maj.size() - i)]);
  std::vector<std::size_t> rows(cr.minority_rows.begin(), cr.minority_rows.end());
  rows.insert(rows.end(), maj.begin(), maj.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(rows.begin(), rows.end());
  return ds.subset_rows(rows);
}

Dataset dual_resample(const Dataset& ds, const ResamplePlan& plan) {
  return random_undersample(smote_oversample(ds, plan), derive_seed(plan.seed, 1));
}

Dataset resample(const Dataset& ds, ResampleMode mode, const ResamplePlan& plan) {
  switch (mode) {
    case ResampleMode::kNone: return ds;
    case ResampleMode::kOverOnly: return smote_oversample(ds, plan);
    case ResampleMode::kUnderOnly: return random_undersample(ds, derive_seed(plan.seed, 1));
    case ResampleMode::kDual: return dual_resample(ds, plan);
  }
  return ds;
}

}  // namespace lifesat
