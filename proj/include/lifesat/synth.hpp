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

#ifndef LIFESAT_SYNTH_HPP_
#define LIFESAT_SYNTH_HPP_

#include <cstdint>
#include <vector>

#include "lifesat/table.hpp"

namespace lifesat {

// Planted-signal generator used by tests and demos.
//
// Every informative column carries a latent uniform draw; the label is
// Discontent for the rows whose summed latent score is lowest, so the
// minority size is exact. Noise columns are independent of the label.
// Columns are named I0.. (informative) and N0.. (noise).
struct SynthSpec {
  std::size_t n_rows = 1000;
  std::size_t n_informative = 3;
  std::size_t n_noise = 7;
  // Minority / majority size. 1.0 means balanced classes.
  double class_imbalance_ratio = 1.0;
  double missing_fraction = 0.0;
  std::uint64_t seed = 0;
  // 0 keeps columns continuous on [0, 4); otherwise values are ordinal codes
  // 0..levels-1 (labels still come from the continuous latent).
  int ordinal_levels = 0;
};

void validate(const SynthSpec& spec);

// Majority/minority row counts implied by a spec.
std::pair<std::size_t, std::size_t> synth_class_sizes(const SynthSpec& spec);

Dataset generate_synthetic(const SynthSpec& spec);

// Same planted rule over an existing schema: the first `n_informative`
// feature columns drive the label, ordinal columns get codes in range and
// numeric columns are drawn inside their declared [min, max].
Dataset generate_for_schema(const Schema& schema, const SynthSpec& spec);

}  // namespace lifesat

#endif  // LIFESAT_SYNTH_HPP_
