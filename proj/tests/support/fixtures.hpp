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

#ifndef LIFESAT_TESTS_FIXTURES_HPP_
#define LIFESAT_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "lifesat/learners.hpp"
#include "lifesat/synth.hpp"
#include "lifesat/table.hpp"

namespace lifesat::fixtures {

inline Dataset planted(std::size_t n, std::size_t informative, std::size_t noise, double ratio, std::uint64_t seed,
                       double missing = 0.0) {
  SynthSpec s;
  s.n_rows = n;
  s.n_informative = informative;
  s.n_noise = noise;
  s.class_imbalance_ratio = ratio;
  s.missing_fraction = missing;
  s.seed = seed;
  return generate_synthetic(s);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("lifesat_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// p(Content) fixed everywhere.
class ConstantModel final : public Classifier {
 public:
  ConstantModel(double p1, std::size_t d) : p1_(p1), d_(d) {}
  std::string kind() const override { return "test_constant"; }
  std::size_t n_features() const override { return d_; }
  ProbaPair predict_proba_row(std::span<const double>) const override { return make_pair_from_p1(p1_); }
  nlohmann::json to_json() const override { return {{"kind", kind()}}; }

 private:
  double p1_;
  std::size_t d_;
};

// Content exactly when x[feature] > threshold.
class StepModel final : public Classifier {
 public:
  StepModel(std::size_t feature, double threshold, std::size_t d) : f_(feature), t_(threshold), d_(d) {}
  std::string kind() const override { return "test_step"; }
  std::size_t n_features() const override { return d_; }
  ProbaPair predict_proba_row(std::span<const double> x) const override {
    return make_pair_from_p1(x[f_] > t_ ? 1.0 : 0.0);
  }
  nlohmann::json to_json() const override { return {{"kind", kind()}}; }

 private:
  std::size_t f_;
  double t_;
  std::size_t d_;
};

// p(Content) = b + sum w_j x_j; callers keep it inside [0, 1].
class LinearProbModel final : public Classifier {
 public:
  LinearProbModel(double bias, std::vector<double> w) : b_(bias), w_(std::move(w)) {}
  std::string kind() const override { return "test_linear"; }
  std::size_t n_features() const override { return w_.size(); }
  ProbaPair predict_proba_row(std::span<const double> x) const override {
    double p = b_;
    for (std::size_t j = 0; j < w_.size(); ++j) p += w_[j] * x[j];
    return make_pair_from_p1(p);
  }
  nlohmann::json to_json() const override { return {{"kind", kind()}}; }

 private:
  double b_;
  std::vector<double> w_;
};

inline std::string source_dir() { return LIFESAT_SOURCE_DIR; }
inline std::string config_path(const std::string& name) { return source_dir() + "/configs/" + name; }

}  // namespace lifesat::fixtures

#endif  // LIFESAT_TESTS_FIXTURES_HPP_
