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

#ifndef LIFESAT_RESAMPLE_HPP_
#define LIFESAT_RESAMPLE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lifesat/table.hpp"

namespace lifesat {

struct ResamplePlan {
  // Minority target as a fraction of the majority count.
  double smote_target_ratio = 0.40;
  int smote_k = 5;
  std::uint64_t seed = 0;
  // Round synthetic values to the nearest integer (ordinal codes).
  bool round_synthetic = false;
};

void validate(const ResamplePlan& plan);

enum class ResampleMode { kNone, kOverOnly, kUnderOnly, kDual };

std::string to_string(ResampleMode mode);
ResampleMode resample_mode_from_string(const std::string& text);

// Synthetic minority rows are appended after the input rows. When `parents`
// is given it receives the (base, neighbour) input row indices of each new
// row, in output order.
Dataset smote_oversample(const Dataset& ds, const ResamplePlan& plan,
                         std::vector<std::pair<std::size_t, std::size_t>>* parents = nullptr);

// Keeps a random subset of the majority rows the size of the minority;
// surviving rows keep their input order.
Dataset random_undersample(const Dataset& ds, std::uint64_t seed);

Dataset dual_resample(const Dataset& ds, const ResamplePlan& plan);

Dataset resample(const Dataset& ds, ResampleMode mode, const ResamplePlan& plan);

}  // namespace lifesat

#endif  // LIFESAT_RESAMPLE_HPP_
