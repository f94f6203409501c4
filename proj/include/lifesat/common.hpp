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

#ifndef LIFESAT_COMMON_HPP_
#define LIFESAT_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lifesat {

// Error hierarchy. Every failure raised by the library derives from Error so
// callers can catch one type and still report the specific cause.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: CSV cells, config files, schema documents.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long row = -1, std::string column = {});
  long row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  long row_;
  std::string column_;
};

// Caller supplied arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input is well formed but mathematically unusable (single class, zero variance).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Feature-count mismatch between a model and the rows handed to it.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Test rows reached a fitting or resampling stage.
class LeakageError : public Error {
 public:
  using Error::Error;
};

// Target classes.
inline constexpr int kDiscontent = 0;
inline constexpr int kContent = 1;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const;

  void append_row(std::span<const double> values);

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix select_rows(std::span<const std::size_t> indices) const;
  Matrix select_cols(std::span<const std::size_t> indices) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Seeded pseudo-random source. The mapping from engine output to uniforms
// and bounded integers is implemented here so streams are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  // Uniform integer on [0, n). n must be positive.
  std::size_t below(std::size_t n);
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Independent stream seed for unit `stream` under `master` (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Runs fn(i) for i in [0, n). Work is spread over hardware threads when more
// than one is available; nested calls run inline. Callers must write results
// into pre-sized slots so output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

double sigmoid(double z);

// Shortest text that parses back to the same double.
std::string format_double(double value);

// Fixed decimals with trailing zeros trimmed, keeping at least one decimal:
// 1.00 -> "1.0", 2.50 -> "2.5", 1.19 -> "1.19".
std::string format_threshold(double value, int decimals = 2);

std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace lifesat

#endif  // LIFESAT_COMMON_HPP_
