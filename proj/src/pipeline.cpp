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

#include "lifesat/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "lifesat/csv.hpp"

namespace lifesat {

namespace fs = std::filesystem;

const std::vector<std::uint64_t>& default_seeds() {
  static const std::vector<std::uint64_t> seeds{21, 42, 63, 84, 105};
  return seeds;
}

const std::vector<std::string>& selection_modes() {
  static const std::vector<std::string> modes{"none", "rfecv", "pca95", "pca90"};
  return modes;
}

const std::vector<ResampleMode>& resample_modes() {
  static const std::vector<ResampleMode> modes{ResampleMode::kNone, ResampleMode::kOverOnly,
                                               ResampleMode::kUnderOnly, ResampleMode::kDual};
  return modes;
}

std::vector<AgeBracket> CohortSpec::default_brackets() {
  return {{"16-21", 16, 21}, {"22-34", 22, 34}, {"35-44", 35, 44}, {"45-64", 45, 64}};
}

void CohortSpec::validate() const {
  if (brackets.empty()) throw InvalidArgument("cohort needs at least one bracket");
  if (top_k == 0) throw InvalidArgument("cohort top_k must be positive");
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    const auto& b = brackets[i];
    if (b.lo > b.hi) throw InvalidArgument("bracket " + b.name + " has lo > hi");
    if (i > 0 && b.lo != brackets[i - 1].hi + 1) {
      throw InvalidArgument("bracket " + b.name + " does not start right after " + brackets[i - 1].name);
    }
  }
}

// ------------------------------------------------------------- config

namespace {

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* n) { return k == n; })) {
      throw ParseError("unknown key '" + k + "' in " + where);
    }
  }
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

bool is_pca(const std::string& mode) { return mode == "pca95" || mode == "pca90"; }

double pca_target(const std::string& mode) { return mode == "pca95" ? 0.95 : 0.90; }

}  // namespace

void PipelineConfig::validate() const {
  if (csv_path.empty() == !synthetic.has_value()) throw InvalidArgument("config needs exactly one of csv or synthetic");
  if (!csv_path.empty() && schema_path.empty()) throw InvalidArgument("csv data needs a schema");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidArgument("train_fraction must lie in (0, 1)");
  if (seeds.empty()) throw InvalidArgument("at least one seed is required");
  if (std::find(selection_modes().begin(), selection_modes().end(), selection_mode) == selection_modes().end()) {
    throw InvalidArgument("unknown selection mode '" + selection_mode + "'");
  }
  lifesat::validate(resample_plan);
  if (models.empty()) throw InvalidArgument("model roster is empty");
  std::set<std::string> names;
  for (const auto& m : models) {
    lifesat::validate(m);
    if (!names.insert(m.name).second) throw InvalidArgument("duplicate model name " + m.name);
  }
  for (const auto& m : ensemble_members) {
    if (!names.contains(m)) throw InvalidArgument("ensemble member " + m + " is not in the roster");
  }
  if (!ensemble_members.empty() && names.contains(ensemble_name)) {
    throw InvalidArgument("ensemble name " + ensemble_name + " clashes with a roster model");
  }
  if (!ensemble_weights.empty() && ensemble_weights.size() != ensemble_members.size()) {
    throw InvalidArgument("ensemble weights and members differ in length");
  }
  for (const auto& t : tuning) {
    if (!names.contains(t.model)) throw InvalidArgument("tuning target " + t.model + " is not in the roster");
  }
  cohort.validate();
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json data = nlohmann::json::object();
  if (!csv_path.empty()) data["csv"] = csv_path;
  if (!schema_path.empty()) data["schema"] = schema_path;
  if (synthetic) {
    data["synthetic"] = {{"n_rows", synthetic->n_rows},
                         {"n_informative", synthetic->n_informative},
                         {"n_noise", synthetic->n_noise},
                         {"class_imbalance_ratio", synthetic->class_imbalance_ratio},
                         {"missing_fraction", synthetic->missing_fraction},
                         {"seed", synthetic->seed},
                         {"ordinal_levels", synthetic->ordinal_levels}};
  }
  nlohmann::json roster = nlohmann::json::array();
  for (const auto& m : models) roster.push_back(m.to_json());
  nlohmann::json tunes = nlohmann::json::array();
  for (const auto& t : tuning) {
    tunes.push_back({{"model", t.model},
                     {"space", t.space.to_json()},
                     {"search", t.random ? "random" : "grid"},
                     {"k_folds", t.k_folds},
                     {"metric", to_string(t.metric)}});
  }
  nlohmann::json brackets = nlohmann::json::array();
  for (const auto& b : cohort.brackets) brackets.push_back({{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
  nlohmann::json explain_json = {{"n_samples", explain.n_samples}};
  if (explain.kernel_width) explain_json["kernel_width"] = *explain.kernel_width;
  return {{"data", data},
          {"split", {{"train_fraction", train_fraction}}},
          {"seeds", seeds},
          {"preprocess",
           {{"null_threshold", preprocess.null_threshold},
            {"impute_mode", preprocess.impute.mode == ImputeMode::kConverge ? "converge" : "single_pass"},
            {"max_rounds", preprocess.impute.max_rounds},
            {"tol", preprocess.impute.tol},
            {"round_ordinal", preprocess.impute.round_ordinal},
            {"sample_std", preprocess.sample_std}}},
          {"resample",
           {{"mode", to_string(resample_mode)},
            {"smote_target_ratio", resample_plan.smote_target_ratio},
            {"smote_k", resample_plan.smote_k},
            {"round_synthetic", resample_plan.round_synthetic}}},
          {"selection",
           {{"mode", selection_mode},
            {"estimator", rfecv.estimator.to_json()},
            {"k_folds", rfecv.k_folds},
            {"step", rfecv.step},
            {"min_features", rfecv.min_features},
            {"metric", to_string(rfecv.metric)},
            {"stratified", rfecv.stratified}}},
          {"models", roster},
          {"ensemble", {{"name", ensemble_name}, {"members", ensemble_members}, {"weights", ensemble_weights}}},
          {"tuning", tunes},
          {"explain", explain_json},
          {"cohort", {{"age_code", cohort.age_code}, {"top_k", cohort.top_k}, {"brackets", brackets}}},
          {"output_dir", output_dir}};
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc, const std::string& base_dir) {
  PipelineConfig c;
  try {
    reject_unknown(doc,
                   {"data", "split", "seeds", "n_seeds", "preprocess", "resample", "selection", "models", "ensemble",
                    "tuning", "explain", "cohort", "output_dir"},
                   "config");
    const auto& data = doc.at("data");
    reject_unknown(data, {"csv", "schema", "synthetic"}, "data");
    if (data.contains("csv")) c.csv_path = resolve(base_dir, data.at("csv").get<std::string>());
    if (data.contains("schema")) c.schema_path = resolve(base_dir, data.at("schema").get<std::string>());
    if (data.contains("synthetic")) {
      const auto& s = data.at("synthetic");
      reject_unknown(s,
                     {"n_rows", "n_informative", "n_noise", "class_imbalance_ratio", "missing_fraction", "seed",
                      "ordinal_levels"},
                     "data.synthetic");
      SynthSpec sp;
      sp.n_rows = s.value("n_rows", sp.n_rows);
      sp.n_informative = s.value("n_informative", sp.n_informative);
      sp.n_noise = s.value("n_noise", sp.n_noise);
      sp.class_imbalance_ratio = s.value("class_imbalance_ratio", sp.class_imbalance_ratio);
      sp.missing_fraction = s.value("missing_fraction", sp.missing_fraction);
      sp.seed = s.value("seed", sp.seed);
      sp.ordinal_levels = s.value("ordinal_levels", sp.ordinal_levels);
      c.synthetic = sp;
    }
    if (doc.contains("split")) {
      reject_unknown(doc.at("split"), {"train_fraction"}, "split");
      c.train_fraction = doc.at("split").value("train_fraction", c.train_fraction);
    }
    if (doc.contains("seeds") && doc.contains("n_seeds")) throw ParseError("give seeds or n_seeds, not both");
    if (doc.contains("seeds")) c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    if (doc.contains("n_seeds")) {
      const auto n = doc.at("n_seeds").get<std::size_t>();
      c.seeds.clear();
      // Defaults continue as multiples of 21.
      for (std::size_t i = 0; i < n; ++i) c.seeds.push_back(21 * (i + 1));
    }
    if (doc.contains("preprocess")) {
      const auto& p = doc.at("preprocess");
      reject_unknown(p, {"null_threshold", "impute_mode", "max_rounds", "tol", "round_ordinal", "sample_std"},
                     "preprocess");
      c.preprocess.null_threshold = p.value("null_threshold", c.preprocess.null_threshold);
      const auto mode = p.value("impute_mode", std::string{"converge"});
      if (mode != "converge" && mode != "single_pass") throw ParseError("unknown impute_mode '" + mode + "'");
      c.preprocess.impute.mode = mode == "converge" ? ImputeMode::kConverge : ImputeMode::kSinglePass;
      c.preprocess.impute.max_rounds = p.value("max_rounds", c.preprocess.impute.max_rounds);
      c.preprocess.impute.tol = p.value("tol", c.preprocess.impute.tol);
      c.preprocess.impute.round_ordinal = p.value("round_ordinal", c.preprocess.impute.round_ordinal);
      c.preprocess.sample_std = p.value("sample_std", c.preprocess.sample_std);
    }
    if (doc.contains("resample")) {
      const auto& r = doc.at("resample");
      reject_unknown(r, {"mode", "smote_target_ratio", "smote_k", "round_synthetic"}, "resample");
      c.resample_mode = resample_mode_from_string(r.value("mode", std::string{"dual"}));
      c.resample_plan.smote_target_ratio = r.value("smote_target_ratio", c.resample_plan.smote_target_ratio);
      c.resample_plan.smote_k = r.value("smote_k", c.resample_plan.smote_k);
      c.resample_plan.round_synthetic = r.value("round_synthetic", c.resample_plan.round_synthetic);
    }
    if (doc.contains("selection")) {
      const auto& s = doc.at("selection");
      reject_unknown(s, {"mode", "estimator", "k_folds", "step", "min_features", "metric", "stratified"},
                     "selection");
      c.selection_mode = s.value("mode", c.selection_mode);
      if (s.contains("estimator")) c.rfecv.estimator = ModelSpec::from_json(s.at("estimator"));
      c.rfecv.k_folds = s.value("k_folds", c.rfecv.k_folds);
      c.rfecv.step = s.value("step", c.rfecv.step);
      c.rfecv.min_features = s.value("min_features", c.rfecv.min_features);
      c.rfecv.metric = metric_from_string(s.value("metric", std::string{"accuracy"}));
      c.rfecv.stratified = s.value("stratified", c.rfecv.stratified);
    }
    for (const auto& m : doc.at("models")) c.models.push_back(ModelSpec::from_json(m));
    if (doc.contains("ensemble")) {
      const auto& e = doc.at("ensemble");
      reject_unknown(e, {"name", "members", "weights"}, "ensemble");
      c.ensemble_name = e.value("name", c.ensemble_name);
      c.ensemble_members = e.value("members", std::vector<std::string>{});
      c.ensemble_weights = e.value("weights", std::vector<double>{});
    }
    if (doc.contains("tuning")) {
      for (const auto& t : doc.at("tuning")) {
        reject_unknown(t, {"model", "space", "search", "k_folds", "metric"}, "tuning entry");
        TuneConfig tc;
        tc.model = t.at("model").get<std::string>();
        tc.space = ParamSpace::from_json(t.at("space"));
        const auto search = t.value("search", std::string{"grid"});
        if (search != "grid" && search != "random") throw ParseError("unknown search '" + search + "'");
        tc.random = search == "random";
        tc.k_folds = t.value("k_folds", tc.k_folds);
        tc.metric = metric_from_string(t.value("metric", std::string{"macro_f1"}));
        c.tuning.push_back(std::move(tc));
      }
    }
    if (doc.contains("explain")) {
      const auto& e = doc.at("explain");
      reject_unknown(e, {"n_samples", "kernel_width"}, "explain");
      c.explain.n_samples = e.value("n_samples", c.explain.n_samples);
      if (e.contains("kernel_width")) c.explain.kernel_width = e.at("kernel_width").get<double>();
    }
    if (doc.contains("cohort")) {
      const auto& h = doc.at("cohort");
      reject_unknown(h, {"age_code", "top_k", "brackets"}, "cohort");
      c.cohort.age_code = h.value("age_code", c.cohort.age_code);
      c.cohort.top_k = h.value("top_k", c.cohort.top_k);
      if (h.contains("brackets")) {
        c.cohort.brackets.clear();
        for (const auto& b : h.at("brackets")) {
          c.cohort.brackets.push_back(
              {b.at("name").get<std::string>(), b.at("lo").get<double>(), b.at("hi").get<double>()});
        }
      }
    }
    c.output_dir = resolve(base_dir, doc.value("output_dir", c.output_dir));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("config: ") + ex.what());
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError("config file " + path + ": " + ex.what());
  }
  return from_json(doc, fs::path(path).parent_path().string());
}

std::string PipelineConfig::fingerprint() const {
  // Where outputs land does not change what is trained.
  auto doc = to_json();
  doc.erase("output_dir");
  return sha256_hex(doc.dump());
}

std::pair<Schema, Dataset> load_data(const PipelineConfig& config) {
  if (!config.csv_path.empty()) {
    Schema schema = Schema::load(config.schema_path);
    Dataset ds = parse_csv(config.csv_path, schema);
    return {std::move(schema), std::move(ds)};
  }
  if (!config.schema_path.empty()) {
    Schema schema = Schema::load(config.schema_path);
    Dataset ds = generate_for_schema(schema, *config.synthetic);
    return {std::move(schema), std::move(ds)};
  }
  Dataset ds = generate_synthetic(*config.synthetic);
  auto cols = ds.columns;
  ColumnMeta label;
  label.code = ds.target_code;
  label.kind = ColumnKind::kLabel;
  cols.push_back(label);
  return {Schema(std::move(cols), ds.target_code), std::move(ds)};
}

// ------------------------------------------------------------- audit

LeakageAudit::LeakageAudit(const Dataset& test) : test_ids_(test.row_ids.begin(), test.row_ids.end()) {
  std::string joined;
  for (auto id : test_ids_) joined += std::to_string(id) + "\n";
  test_hash_ = sha256_hex(joined);
}

void LeakageAudit::check(const std::string& stage, const Dataset& ds) {
  std::size_t synthetic = 0;
  for (auto id : ds.row_ids) {
    if (id & kSyntheticRowBit) {
      ++synthetic;
      continue;
    }
    if (test_ids_.contains(id)) throw LeakageError("test row " + std::to_string(id) + " reached stage " + stage);
  }
  stages_.push_back({{"stage", stage}, {"rows", ds.rows()}, {"synthetic_rows", synthetic}, {"test_overlap", 0}});
}

nlohmann::json LeakageAudit::to_json() const {
  return {{"test_rows", test_ids_.size()}, {"test_id_sha256", test_hash_}, {"stages", stages_}};
}

// ------------------------------------------------------------- training

SeedRun run_seed(const PipelineConfig& config, const Schema& schema, const Dataset& full, std::uint64_t seed) {
  SeedRun run;
  run.seed = seed;
  const auto split = shuffle_split(full, config.train_fraction, seed);
  LeakageAudit audit(split.test);

  audit.check("preprocess_fit", split.train);
  auto [pre, train_p] = FittedPreprocessor::fit(split.train, config.preprocess);
  const Dataset test_p = pre.apply(split.test);
  run.features_after_preprocess = train_p.cols();
  spdlog::info("seed {}: {} features after preprocessing", seed, train_p.cols());

  ResamplePlan plan = config.resample_plan;
  plan.seed = derive_seed(seed, 2);
  audit.check("resample", train_p);
  const Dataset train_r = resample(train_p, config.resample_mode, plan);

  ModelArtifact& art = run.artifact;
  art.schema = schema;
  art.preprocessor = pre;
  art.selection_mode = config.selection_mode;
  art.config_fingerprint = config.fingerprint();
  art.seed = seed;

  audit.check("selection", train_r);
  Dataset train_m, test_m, disc_src;
  if (config.selection_mode == "rfecv") {
    RfecvOptions opts = config.rfecv;
    opts.seed = derive_seed(seed, 3);
    run.rfecv = rfecv(train_r, opts);
    art.input_codes = run.rfecv->selected_codes;
    train_m = train_r.select_columns(art.input_codes);
    test_m = test_p.select_columns(art.input_codes);
    disc_src = train_p.select_columns(art.input_codes);
  } else if (is_pca(config.selection_mode)) {
    auto [pca, projected] = pca_reduce(train_r, pca_target(config.selection_mode));
    art.input_codes = train_r.codes();
    train_m = std::move(projected);
    test_m = pca_apply(pca, test_p);
    disc_src = pca_apply(pca, train_p);
    art.pca = std::move(pca);
  } else {
    art.input_codes = train_r.codes();
    train_m = train_r;
    test_m = test_p;
    disc_src = train_p;
  }
  art.discretizer = fit_discretizer(disc_src);

  audit.check("model_fit", train_m);
  const auto& y = *train_m.labels;
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    ModelSpec spec = config.models[i];
    for (const auto& t : config.tuning) {
      if (t.model != spec.name) continue;
      const auto search = t.random ? random_search(t.space, spec, train_m.values, y, t.k_folds, t.metric,
                                                   derive_seed(seed, 4))
                                   : grid_search(t.space, spec, train_m.values, y, t.k_folds, t.metric,
                                                 derive_seed(seed, 4));
      run.tuning[spec.name] = search.to_json();
      spec = with_params(spec, search.best_params);
    }
    art.models.emplace_back(spec.name, fit_model(spec, train_m.values, y, {}, derive_seed(seed, 100 + i)));
  }
  if (!config.ensemble_members.empty()) {
    std::vector<ModelPtr> members;
    for (const auto& name : config.ensemble_members) {
      for (const auto& [n, m] : art.models) {
        if (n == name) members.push_back(m);
      }
    }
    art.models.emplace_back(config.ensemble_name,
                            build_voting_ensemble(members, config.ensemble_weights, config.ensemble_members));
    art.primary = config.ensemble_name;
  } else {
    art.primary = art.models.front().first;
  }

  for (const auto& [name, m] : art.models) run.reports.push_back(evaluate(name, *m, test_m.values, *test_m.labels));
  run.errors = error_breakdown(art.models, test_m.values, *test_m.labels);
  run.audit = audit.to_json();
  run.audit["seed"] = seed;
  return run;
}

TrainingResult run_training(const PipelineConfig& config, const Schema& schema, const Dataset& full) {
  config.validate();
  TrainingResult result;
  result.runs.resize(config.seeds.size());
  parallel_for(config.seeds.size(), [&](std::size_t i) {
    try {
      result.runs[i] = run_seed(config, schema, full, config.seeds[i]);
    } catch (const LeakageError&) {
      throw;
    } catch (const Error& ex) {
      throw Error("seed " + std::to_string(config.seeds[i]) + ": " + ex.what());
    }
  });
  std::vector<EvaluationReport> all;
  for (const auto& r : result.runs) all.insert(all.end(), r.reports.begin(), r.reports.end());
  result.summary = mean_std_report(all);
  auto primary_accuracy = [](const SeedRun& r) {
    for (const auto& rep : r.reports) {
      if (rep.model == r.artifact.primary) return rep.accuracy;
    }
    return 0.0;
  };
  for (std::size_t i = 1; i < result.runs.size(); ++i) {
    if (primary_accuracy(result.runs[i]) > primary_accuracy(result.runs[result.best_run])) result.best_run = i;
  }
  return result;
}

TrainingResult run_training(const PipelineConfig& config) {
  const auto [schema, full] = load_data(config);
  return run_training(config, schema, full);
}

nlohmann::json TrainingResult::report_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> feature_counts;
  for (const auto& r : runs) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : r.reports) reps.push_back(rep.to_json(false));
    runs_json.push_back({{"seed", r.seed}, {"inputs", r.artifact.model_codes()}, {"reports", reps}});
    seeds.push_back(r.seed);
    feature_counts.push_back(r.features_after_preprocess);
  }
  const auto& best = runs[best_run];
  return {{"primary", best.artifact.primary},
          {"selection", best.artifact.selection_mode},
          {"config_fingerprint", best.artifact.config_fingerprint},
          {"seeds", seeds},
          {"best_seed", best.seed},
          {"features_after_preprocess", feature_counts},
          {"summary", summary_json(summary)},
          {"runs", runs_json}};
}

void write_training_outputs(const TrainingResult& result, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path d(dir);
  const auto& best = result.runs[result.best_run];
  write_file((d / "report.json").string(), result.report_json().dump(2) + "\n");
  write_file((d / "report.csv").string(), summary_csv(result.summary));
  write_file((d / "error_analysis.csv").string(), error_breakdown_csv(best.errors));
  nlohmann::json audits = nlohmann::json::array();
  nlohmann::json curves = nlohmann::json::array();
  nlohmann::json tuning = nlohmann::json::array();
  for (const auto& r : result.runs) {
    audits.push_back(r.audit);
    if (r.rfecv) {
      auto j = r.rfecv->to_json();
      j["seed"] = r.seed;
      curves.push_back(std::move(j));
    }
    if (!r.tuning.empty()) tuning.push_back({{"seed", r.seed}, {"searches", r.tuning}});
  }
  write_file((d / "audit.json").string(), audits.dump(2) + "\n");
  if (!curves.empty()) write_file((d / "rfecv_curve.json").string(), curves.dump(2) + "\n");
  if (!tuning.empty()) write_file((d / "tuning.json").string(), tuning.dump(2) + "\n");
  write_file((d / "questionnaire.json").string(), best.artifact.questionnaire().to_json().dump(2) + "\n");
  save_artifact(best.artifact, (d / "model.artifact").string());
}

// ------------------------------------------------------------- cohort

std::vector<CohortResult> cohort_analysis(const Dataset& ds, const CohortSpec& spec, const PipelineConfig& config) {
  spec.validate();
  const std::size_t age = ds.require_column(spec.age_code);
  if (!ds.labels) throw InvalidArgument("cohort analysis needs labels");
  const std::uint64_t seed = config.seeds.front();
  const std::vector<std::string> age_col{spec.age_code};
  std::vector<CohortResult> out(spec.brackets.size());
  for (std::size_t b = 0; b < spec.brackets.size(); ++b) {
    const auto& br = spec.brackets[b];
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      if (ds.is_missing(r, age)) continue;
      const double a = ds.values(r, age);
      if (a >= br.lo && a <= br.hi) rows.push_back(r);
    }
    if (rows.empty()) throw DegenerateInput("age bracket " + br.name + " has no rows");
    const Dataset sub = ds.subset_rows(rows).drop_columns(age_col);
    auto [pre, processed] = FittedPreprocessor::fit(sub, config.preprocess);
    ResamplePlan plan = config.resample_plan;
    plan.seed = derive_seed(seed, 2);
    const Dataset balanced = resample(processed, config.resample_mode, plan);
    RfecvOptions opts = config.rfecv;
    opts.seed = derive_seed(seed, 3);
    const auto sel = rfecv(balanced, opts);
    CohortResult res{br, rows.size(), {}};
    const std::size_t k = std::min(spec.top_k, sel.importances.size());
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += sel.importances[i].second;
    for (std::size_t i = 0; i < k; ++i) {
      const double v = total > 0.0 ? sel.importances[i].second / total : 1.0 / static_cast<double>(k);
      res.features.emplace_back(sel.importances[i].first, v);
    }
    out[b] = std::move(res);
    spdlog::info("cohort {}: {} rows, top feature {}", br.name, rows.size(), out[b].features.front().first);
  }
  return out;
}

nlohmann::json cohort_json(const std::vector<CohortResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json feats = nlohmann::json::array();
    for (const auto& [code, v] : r.features) feats.push_back({{"code", code}, {"importance", v}});
    arr.push_back({{"name", r.bracket.name},
                   {"age_lo", r.bracket.lo},
                   {"age_hi", r.bracket.hi},
                   {"rows", r.rows},
                   {"features", feats}});
  }
  return {{"brackets", arr}};
}

// ------------------------------------------------------------- ablation

namespace {

void run_cells(const PipelineConfig& cfg, const Schema& schema, const Dataset& full, const std::string& mode,
               std::vector<AblationCell>& cells) {
  try {
    const auto result = run_training(cfg, schema, full);
    for (const auto& row : result.summary) {
      cells.push_back({mode, row.model, row.metrics.at("Accuracy"), row.metrics.at("F1"), {}});
    }
  } catch (const LeakageError&) {
    throw;
  } catch (const Error& ex) {
    spdlog::warn("ablation cell {} failed: {}", mode, ex.what());
    cells.push_back({mode, "*", {}, {}, ex.what()});
  }
}

}  // namespace

AblationTables ablation_run(const PipelineConfig& config, const Schema& schema, const Dataset& full) {
  AblationTables t;
  for (auto m : resample_modes()) {
    PipelineConfig cfg = config;
    cfg.resample_mode = m;
    t.resampling_modes.push_back(to_string(m));
    run_cells(cfg, schema, full, to_string(m), t.resampling);
  }
  for (const auto& m : selection_modes()) {
    PipelineConfig cfg = config;
    cfg.selection_mode = m;
    t.selection_modes.push_back(m);
    run_cells(cfg, schema, full, m, t.selection);
  }
  return t;
}

AblationTables ablation_run(const PipelineConfig& config) {
  const auto [schema, full] = load_data(config);
  return ablation_run(config, schema, full);
}

nlohmann::json AblationTables::to_json() const {
  auto cells_json = [](const std::vector<AblationCell>& cells) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cells) {
      nlohmann::json j = {{"mode", c.mode}, {"model", c.model}};
      if (c.error.empty()) {
        j["accuracy"] = {{"mean", c.accuracy.mean}, {"std", c.accuracy.std}};
        j["macro_f1"] = {{"mean", c.macro_f1.mean}, {"std", c.macro_f1.std}};
      } else {
        j["error"] = c.error;
      }
      arr.push_back(std::move(j));
    }
    return arr;
  };
  return {{"resampling", {{"modes", resampling_modes}, {"cells", cells_json(resampling)}}},
          {"selection", {{"modes", selection_modes}, {"cells", cells_json(selection)}}}};
}

std::string AblationTables::table_csv(const std::vector<std::string>& modes, const std::vector<AblationCell>& cells) {
  std::vector<std::string> models;
  for (const auto& c : cells) {
    if (c.model != "*" && std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
  }
  std::string out = "model";
  for (const auto& m : modes) out += "," + m + " Acc," + m + " F1";
  out += "\n";
  for (const auto& model : models) {
    out += model;
    for (const auto& mode : modes) {
      const AblationCell* hit = nullptr;
      for (const auto& c : cells) {
        if (c.mode == mode && (c.model == model || c.model == "*")) hit = &c;
      }
      if (hit && hit->error.empty()) {
        out += fmt::format(",{:.2f},{:.2f}", hit->accuracy.mean, hit->macro_f1.mean);
      } else {
        out += ",error,error";
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace lifesat
