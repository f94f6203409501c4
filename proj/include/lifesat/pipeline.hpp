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

#ifndef LIFESAT_PIPELINE_HPP_
#define LIFESAT_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lifesat/artifact.hpp"
#include "lifesat/explain.hpp"
#include "lifesat/learners.hpp"
#include "lifesat/metrics.hpp"
#include "lifesat/preprocess.hpp"
#include "lifesat/resample.hpp"
#include "lifesat/selection.hpp"
#include "lifesat/synth.hpp"
#include "lifesat/tuning.hpp"

namespace lifesat {

const std::vector<std::uint64_t>& default_seeds();
const std::vector<std::string>& selection_modes();
const std::vector<ResampleMode>& resample_modes();

struct AgeBracket {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

struct CohortSpec {
  std::string age_code = "age";
  std::vector<AgeBracket> brackets = default_brackets();
  std::size_t top_k = 5;

  static std::vector<AgeBracket> default_brackets();
  // Brackets must be ascending, integer-contiguous and non-overlapping.
  void validate() const;
};

struct TuneConfig {
  std::string model;
  ParamSpace space;
  bool random = false;
  std::size_t k_folds = 3;
  Metric metric = Metric::kMacroF1;
};

struct PipelineConfig {
  // Either a CSV file with its schema, or a synthetic spec (schema optional).
  std::string csv_path;
  std::string schema_path;
  std::optional<SynthSpec> synthetic;

  double train_fraction = 0.8;
  std::vector<std::uint64_t> seeds = default_seeds();
  PreprocessConfig preprocess;
  ResampleMode resample_mode = ResampleMode::kDual;
  ResamplePlan resample_plan;
  // rfecv, pca95, pca90 or none.
  std::string selection_mode = "rfecv";
  RfecvOptions rfecv;
  std::vector<ModelSpec> models;
  std::vector<std::string> ensemble_members;
  std::vector<double> ensemble_weights;
  std::string ensemble_name = "Ensemble";
  std::vector<TuneConfig> tuning;
  ExplainOptions explain;
  CohortSpec cohort;
  std::string output_dir = "out";

  void validate() const;
  nlohmann::json to_json() const;
  // Relative paths resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
  static PipelineConfig load(const std::string& path);
  std::string fingerprint() const;
};

// Schema and full labelled dataset named by the config.
std::pair<Schema, Dataset> load_data(const PipelineConfig& config);

// Records which rows reached each fitting stage and rejects test rows.
class LeakageAudit {
 public:
  explicit LeakageAudit(const Dataset& test);

  // Throws LeakageError when a test row id appears in `ds`.
  void check(const std::string& stage, const Dataset& ds);
  nlohmann::json to_json() const;
  const std::set<std::uint64_t>& test_ids() const { return test_ids_; }

 private:
  std::set<std::uint64_t> test_ids_;
  std::string test_hash_;
  nlohmann::json stages_ = nlohmann::json::array();
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::size_t features_after_preprocess = 0;
  std::vector<EvaluationReport> reports;
  std::vector<ErrorRow> errors;
  std::optional<RfecvResult> rfecv;
  nlohmann::json tuning = nlohmann::json::object();
  nlohmann::json audit;
  ModelArtifact artifact;
};

struct TrainingResult {
  std::vector<SeedRun> runs;
  std::vector<SummaryRow> summary;
  std::size_t best_run = 0;

  const ModelArtifact& best_artifact() const { return runs[best_run].artifact; }
  nlohmann::json report_json() const;
};

SeedRun run_seed(const PipelineConfig& config, const Schema& schema, const Dataset& full, std::uint64_t seed);
TrainingResult run_training(const PipelineConfig& config);
TrainingResult run_training(const PipelineConfig& config, const Schema& schema, const Dataset& full);

// report.json, report.csv, error_analysis.csv, rfecv_curve.json, audit.json,
// questionnaire.json and model.artifact under `dir`.
void write_training_outputs(const TrainingResult& result, const std::string& dir);

struct CohortResult {
  AgeBracket bracket;
  std::size_t rows = 0;
  // Top features with importances normalized to sum to 1.
  std::vector<std::pair<std::string, double>> features;
};

std::vector<CohortResult> cohort_analysis(const Dataset& ds, const CohortSpec& spec, const PipelineConfig& config);
nlohmann::json cohort_json(const std::vector<CohortResult>& results);

struct AblationCell {
  std::string mode;
  std::string model;
  MeanStd accuracy;
  MeanStd macro_f1;
  std::string error;
};

struct AblationTables {
  std::vector<std::string> resampling_modes;
  std::vector<std::string> selection_modes;
  std::vector<AblationCell> resampling;
  std::vector<AblationCell> selection;

  nlohmann::json to_json() const;
  // Rows are models, columns are "<mode> Acc" and "<mode> F1".
  static std::string table_csv(const std::vector<std::string>& modes, const std::vector<AblationCell>& cells);
};

AblationTables ablation_run(const PipelineConfig& config);
AblationTables ablation_run(const PipelineConfig& config, const Schema& schema, const Dataset& full);

}  // namespace lifesat

#endif  // LIFESAT_PIPELINE_HPP_
