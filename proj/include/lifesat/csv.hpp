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

#ifndef LIFESAT_CSV_HPP_
#define LIFESAT_CSV_HPP_

#include <string>
#include <vector>

#include "lifesat/table.hpp"

namespace lifesat {

struct CsvOptions {
  std::vector<std::string> missing_markers{"", "NA", "NaN"};
  // When false, a file without the target column yields an unlabeled dataset.
  bool require_labels = true;
};

// Splits one RFC 4180 record. Quoted fields may contain commas and doubled
// quotes; embedded newlines are not supported.
std::vector<std::string> split_csv_line(const std::string& line);

Dataset parse_csv(const std::string& path, const Schema& schema, const CsvOptions& options = {});
Dataset parse_csv_text(const std::string& text, const Schema& schema,
                       const CsvOptions& options = {});

// Header-driven schema for files that come without one: every column is
// numeric except `target_code`.
Schema infer_schema(const std::string& path, const std::string& target_code,
                    std::optional<double> label_threshold = std::nullopt);

// Writes codes as the header, masked cells as the first missing marker and
// numbers in shortest round-trip form.
std::string write_csv_text(const Dataset& ds, const CsvOptions& options = {});
void write_csv(const Dataset& ds, const std::string& path, const CsvOptions& options = {});

}  // namespace lifesat

#endif  // LIFESAT_CSV_HPP_
