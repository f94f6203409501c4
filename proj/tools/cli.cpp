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

#include "cli.hpp"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>

#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "lifesat/artifact.hpp"
#include "lifesat/csv.hpp"
#include "lifesat/explain.hpp"
#include "lifesat/metrics.hpp"
#include "lifesat/pipeline.hpp"
#include "lifesat/service.hpp"
#include "lifesat/textgen.hpp"

namespace lifesat::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kUsage = 2;

void print_summary(const std::vector<SummaryRow>& rows) {
  std::cout << fmt::format("{:<22}", "model");
  for (const auto& m : report_metrics()) std::cout << fmt::format("{:>18}", m);
  std::cout << "\n";
  for (const auto& r : rows) {
    std::cout << fmt::format("{:<22}", r.model);
    for (const auto& m : report_metrics()) std::cout << fmt::format("{:>18}", format_mean_std(r.metrics.at(m)));
    std::cout << "\n";
  }
}

PipelineConfig load_config(const std::string& path, const std::string& output) {
  PipelineConfig c = PipelineConfig::load(path);
  if (!output.empty()) c.output_dir = output;
  return c;
}

int cmd_train(const std::string& config_path, const std::string& output) {
  const auto cfg = load_config(config_path, output);
  const auto result = run_training(cfg);
  write_training_outputs(result, cfg.output_dir);
  print_summary(result.summary);
  std::cout << "artifact: " << (fs::path(cfg.output_dir) / "model.artifact").string() << "\n";
  return 0;
}

int cmd_evaluate(const std::string& artifact_path, const std::string& data, const std::string& output) {
  const auto art = load_artifact(artifact_path);
  const Dataset ds = parse_csv(data, art.schema);
  const Matrix X = art.model_inputs(ds);
  nlohmann::json reports = nlohmann::json::array();
  std::vector<EvaluationReport> all;
  for (const auto& [name, m] : art.models) {
    all.push_back(evaluate(name, *m, X, *ds.labels));
    reports.push_back(all.back().to_json(false));
  }
  const nlohmann::json doc = {{"primary", art.primary}, {"rows", ds.rows()}, {"reports", reports}};
  if (!output.empty()) write_file(output, doc.dump(2) + "\n");
  print_summary(mean_std_report(all));
  return 0;
}

// A row is a JSON answers file ({"answers": {...}} or a bare object), a
// one-row CSV, or inline "code=value,code=value".
std::vector<double> read_row(const ModelArtifact& art, const std::string& row) {
  if (fs::exists(row) && fs::path(row).extension() == ".csv") {
    CsvOptions opts;
    opts.require_labels = false;
    const Dataset ds = parse_csv(row, art.schema, opts);
    if (ds.rows() != 1) throw InvalidArgument("row file must hold exactly one data row");
    const Matrix X = art.model_inputs(ds);
    return {X.data().begin(), X.data().end()};
  }
  std::map<std::string, double> answers;
  if (fs::exists(row)) {
    auto doc = nlohmann::json::parse(read_file(row));
    if (doc.contains("answers")) doc = doc.at("answers");
    for (const auto& [k, v] : doc.items()) answers[k] = v.get<double>();
  } else {
    std::size_t pos = 0;
    while (pos <= row.size()) {
      const auto comma = std::min(row.find(',', pos), row.size());
      const auto item = row.substr(pos, comma - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("expected code=value, got '" + item + "'");
      answers[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      pos = comma + 1;
    }
  }
  const auto q = art.questionnaire();
  for (const auto& item : q.items) {
    const auto it = answers.find(item.code);
    if (it == answers.end()) throw InvalidArgument("missing answer for " + item.code);
    item.check_answer(it->second);
  }
  return art.answers_to_inputs(answers);
}

int cmd_explain(const std::string& artifact_path, const std::string& row, std::size_t samples, std::uint64_t seed,
                bool json) {
  const auto art = load_artifact(artifact_path);
  const auto x = read_row(art, row);
  const Classifier& model = art.model();
  ExplainOptions opts;
  opts.n_samples = samples;
  opts.seed = seed;
  opts.explained_class = model.predict_row(x);
  const auto ex = explain_instance(model, x, art.discretizer, opts);
  if (json) {
    std::cout << ex.to_json().dump(2) << "\n";
    return 0;
  }
  std::cout << fmt::format("prediction: {}\n", class_name(opts.explained_class));
  std::cout << fmt::format("probabilities: {} {:.4f}  {} {:.4f}\n", class_name(kDiscontent), ex.class_probs[0],
                           class_name(kContent), ex.class_probs[1]);
  std::cout << fmt::format("intercept {:+.4f}  fidelity {:.3f}\n", ex.intercept, ex.fidelity);
  for (const auto& c : ex.contributions) std::cout << fmt::format("  {:<28} {:+.4f}\n", c.rule, c.weight);
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& output) {
  const auto cfg = load_config(config_path, output);
  const auto t = ablation_run(cfg);
  fs::create_directories(cfg.output_dir);
  const fs::path d(cfg.output_dir);
  write_file((d / "ablation.json").string(), t.to_json().dump(2) + "\n");
  const auto rs = AblationTables::table_csv(t.resampling_modes, t.resampling);
  const auto ss = AblationTables::table_csv(t.selection_modes, t.selection);
  write_file((d / "ablation_resampling.csv").string(), rs);
  write_file((d / "ablation_selection.csv").string(), ss);
  std::cout << rs << "\n" << ss;
  return 0;
}

int cmd_cohort(const std::string& config_path, const std::string& output) {
  const auto cfg = load_config(config_path, output);
  const auto [schema, ds] = load_data(cfg);
  const auto res = cohort_analysis(ds, cfg.cohort, cfg);
  fs::create_directories(cfg.output_dir);
  const auto doc = cohort_json(res);
  write_file((fs::path(cfg.output_dir) / "cohort.json").string(), doc.dump(2) + "\n");
  for (const auto& r : res) {
    std::cout << fmt::format("{} ({} rows):", r.bracket.name, r.rows);
    for (const auto& [code, v] : r.features) std::cout << fmt::format(" {} {:.3f}", code, v);
    std::cout << "\n";
  }
  return 0;
}

int cmd_textgen(const std::string& config_path, const std::string& mapping_path, const std::string& output) {
  const auto cfg = PipelineConfig::load(config_path);
  const auto [schema, ds] = load_data(cfg);
  const auto table = MappingTable::load(mapping_path);
  std::vector<std::string> codes;
  for (const auto& e : table.entries) codes.push_back(e.code);
  const auto issues = validate_mapping(table, build_questionnaire(schema, codes));
  for (const auto& i : issues) spdlog::warn("mapping: {}", i.message);
  if (!issues.empty()) throw InvalidArgument(std::to_string(issues.size()) + " mapping issue(s)");
  auto [pre, processed] = FittedPreprocessor::fit(ds, cfg.preprocess);
  const auto n = export_text(processed, table, output);
  std::cout << n << " records written to " << output << "\n";
  return 0;
}

std::atomic<Service*> g_service{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_service.load()) s->stop();
}

int cmd_serve(ServiceOptions opts) {
  Service svc(opts);
  if (!svc.ready()) spdlog::warn("serving in degraded mode: {}", svc.load_error());
  g_service = &svc;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const bool ok = svc.serve();
  g_service = nullptr;
  if (!ok) {
    spdlog::error("cannot listen on {}", opts.bind);
    return 1;
  }
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("lifesat"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Life-satisfaction survey modelling toolkit"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");

  std::string config, output, artifact, data, row, mapping;
  std::size_t samples = 5000;
  std::uint64_t seed = 0;
  bool json = false;

  auto* train = app.add_subcommand("train", "Train the model roster over all seeds");
  train->add_option("-c,--config", config, "Pipeline config")->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output", output, "Output directory (overrides config)");

  auto* eval = app.add_subcommand("evaluate", "Score an artifact on a labelled CSV");
  eval->add_option("-a,--artifact", artifact, "Model artifact")->required()->check(CLI::ExistingFile);
  eval->add_option("-d,--data", data, "Labelled CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("-o,--output", output, "Write the report JSON here");

  auto* expl = app.add_subcommand("explain", "Explain one prediction");
  expl->add_option("-a,--artifact", artifact, "Model artifact")->required()->check(CLI::ExistingFile);
  expl->add_option("-r,--row", row, "Answers JSON, one-row CSV, or code=value,...")->required();
  expl->add_option("-n,--samples", samples, "Perturbation count")->check(CLI::Range(10, 1000000));
  expl->add_option("-s,--seed", seed, "Perturbation seed");
  expl->add_flag("--json", json, "Print the explanation as JSON");

  auto* ablate = app.add_subcommand("ablate", "Resampling and selection ablation grids");
  ablate->add_option("-c,--config", config, "Pipeline config")->required()->check(CLI::ExistingFile);
  ablate->add_option("-o,--output", output, "Output directory (overrides config)");

  auto* cohort = app.add_subcommand("cohort", "Top features per age bracket");
  cohort->add_option("-c,--config", config, "Pipeline config")->required()->check(CLI::ExistingFile);
  cohort->add_option("-o,--output", output, "Output directory (overrides config)");

  auto* textgen = app.add_subcommand("textgen", "Export one sentence per row as JSON lines");
  textgen->add_option("-c,--config", config, "Pipeline config")->required()->check(CLI::ExistingFile);
  textgen->add_option("-m,--mapping", mapping, "Mapping table")->required()->check(CLI::ExistingFile);
  textgen->add_option("-o,--output", output, "Output .jsonl path")->required();

  ServiceOptions sopts;
  try {
    sopts.apply_env();
  } catch (const Error& ex) {
    std::cerr << ex.what() << "\n";
    return kUsage;
  }
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--artifact", sopts.artifact_path, "Model artifact [env LIFESAT_ARTIFACT]");
  serve->add_option("--bind", sopts.bind, "host:port [env LIFESAT_BIND]");
  serve->add_option("--max-concurrency", sopts.max_concurrency, "Handler threads [env LIFESAT_MAX_CONCURRENCY]")
      ->check(CLI::PositiveNumber);
  serve->add_option("--static-dir", sopts.static_dir, "Directory served at / [env LIFESAT_STATIC_DIR]");
  serve->add_option("--explain-samples", sopts.explain_samples, "Perturbations per explanation")
      ->check(CLI::Range(10, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*train) return cmd_train(config, output);
    if (*eval) return cmd_evaluate(artifact, data, output);
    if (*expl) return cmd_explain(artifact, row, samples, seed, json);
    if (*ablate) return cmd_ablate(config, output);
    if (*cohort) return cmd_cohort(config, output);
    if (*textgen) return cmd_textgen(config, mapping, output);
    if (*serve) return cmd_serve(sopts);
  } catch (const std::exception& ex) {
    spdlog::error("{}", ex.what());
    return 1;
  }
  return kUsage;
}

}  // namespace lifesat::cli
