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

#include "lifesat/service.hpp"

#include <cstdlib>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "lifesat/explain.hpp"

namespace lifesat {

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

HttpResult error_result(int status, const std::string& kind, const std::string& message) {
  return {status, {{"error", kind}, {"message", message}}};
}

}  // namespace

void ServiceOptions::apply_env() {
  if (auto v = env("LIFESAT_ARTIFACT")) artifact_path = *v;
  if (auto v = env("LIFESAT_BIND")) bind = *v;
  if (auto v = env("LIFESAT_MAX_CONCURRENCY")) {
    try {
      std::size_t used = 0;
      const long n = std::stol(*v, &used);
      if (used != v->size() || n < 1) throw std::invalid_argument(*v);
      max_concurrency = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
      throw InvalidArgument("LIFESAT_MAX_CONCURRENCY must be a positive integer");
    }
  }
  if (auto v = env("LIFESAT_STATIC_DIR")) static_dir = *v;
}

std::pair<std::string, int> ServiceOptions::host_port() const {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0) throw InvalidArgument("bind address must look like host:port");
  const std::string port_text = bind.substr(colon + 1);
  try {
    std::size_t used = 0;
    const int port = std::stoi(port_text, &used);
    if (used != port_text.size() || port < 0 || port > 65535) throw std::out_of_range(port_text);
    return {bind.substr(0, colon), port};
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad port in bind address '" + bind + "'");
  }
}

Service::Service(ServiceOptions options) : options_(std::move(options)), started_(std::chrono::steady_clock::now()) {
  if (options_.max_concurrency < 1) throw InvalidArgument("max concurrency must be at least 1");
  if (options_.artifact_path.empty()) {
    load_error_ = "no artifact configured";
    return;
  }
  try {
    auto a = std::make_shared<ModelArtifact>(load_artifact(options_.artifact_path, &fingerprint_));
    questionnaire_body_ = a->questionnaire().to_json().dump();
    artifact_ = std::move(a);
    spdlog::info("loaded artifact {} ({})", options_.artifact_path, fingerprint_);
  } catch (const Error& ex) {
    load_error_ = ex.what();
    fingerprint_.clear();
    spdlog::error("artifact not loaded: {}", ex.what());
  }
}

Service::~Service() { stop(); }

HttpResult Service::questionnaire() const {
  if (!artifact_) return error_result(503, "unavailable", load_error_);
  return {200, nlohmann::json::parse(questionnaire_body_)};
}

HttpResult Service::health() const {
  const double uptime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  nlohmann::json body = {{"status", artifact_ ? "ok" : "degraded"},
                         {"format_version", kArtifactVersion},
                         {"uptime_seconds", uptime}};
  if (artifact_) {
    body["fingerprint"] = fingerprint_;
    body["model"] = artifact_->primary;
  } else {
    body["fingerprint"] = nullptr;
    body["reason"] = load_error_;
  }
  return {200, body};
}

HttpResult Service::predict(const std::string& text, bool full) const {
  if (!artifact_) return error_result(503, "unavailable", load_error_);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    return error_result(400, "invalid_json", ex.what());
  }
  if (!doc.is_object() || !doc.contains("answers") || !doc.at("answers").is_object()) {
    return error_result(400, "invalid_request", "body must be an object with an \"answers\" object");
  }
  const auto& given = doc.at("answers");
  const auto q = artifact_->questionnaire();
  std::map<std::string, double> answers;
  nlohmann::json missing = nlohmann::json::array();
  nlohmann::json invalid = nlohmann::json::array();
  for (const auto& item : q.items) {
    if (!given.contains(item.code)) {
      missing.push_back(item.code);
      continue;
    }
    const auto& v = given.at(item.code);
    if (!v.is_number()) {
      invalid.push_back({{"code", item.code}, {"message", "answer must be a number"}});
      continue;
    }
    try {
      item.check_answer(v.get<double>());
      answers[item.code] = v.get<double>();
    } catch (const InvalidArgument& ex) {
      invalid.push_back({{"code", item.code}, {"value", v}, {"message", ex.what()}});
    }
  }
  for (const auto& [code, v] : given.items()) {
    if (!q.find(code)) invalid.push_back({{"code", code}, {"message", "not a questionnaire item"}});
  }
  if (!missing.empty() || !invalid.empty()) {
    std::string msg;
    if (!missing.empty()) {
      msg = "missing answers:";
      for (const auto& m : missing) msg += " " + m.get<std::string>();
    }
    if (!invalid.empty()) msg += std::string(msg.empty() ? "" : "; ") + "invalid answers";
    return {422, {{"error", "validation"}, {"message", msg}, {"missing", missing}, {"invalid", invalid}}};
  }

  const auto x = artifact_->answers_to_inputs(answers);
  const Classifier& model = artifact_->model();
  const ProbaPair proba = model.predict_proba_row(x);
  const int label = model.predict_row(x);
  ExplainOptions opts;
  opts.n_samples = options_.explain_samples;
  opts.seed = options_.explain_seed;
  opts.explained_class = label;
  nlohmann::json explanation;
  try {
    explanation = explain_instance(model, x, artifact_->discretizer, opts).to_json(full ? 0 : options_.top_rules);
  } catch (const DegenerateInput& ex) {
    explanation = {{"error", ex.what()}};
  }
  return {200,
          {{"label", class_name(label)},
           {"probabilities", {{class_name(kDiscontent), proba[0]}, {class_name(kContent), proba[1]}}},
           {"explanation", explanation},
           {"model", artifact_->primary},
           {"fingerprint", fingerprint_}}};
}

void Service::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  const std::size_t n = options_.max_concurrency;
  server_->new_task_queue = [n] { return new httplib::ThreadPool(n); };
  auto send = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->Get("/questionnaire", [this, send](const httplib::Request&, httplib::Response& res) {
    // Served from the cached text so repeated calls are byte-identical.
    if (artifact_) {
      res.set_content(questionnaire_body_, "application/json");
    } else {
      send(res, questionnaire());
    }
  });
  server_->Get("/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server_->Post("/predict", [this, send](const httplib::Request& req, httplib::Response& res) {
    const bool full = req.has_param("full") && req.get_param_value("full") != "0" &&
                      req.get_param_value("full") != "false";
    try {
      send(res, predict(req.body, full));
    } catch (const Error& ex) {
      send(res, error_result(500, "internal", ex.what()));
    }
  });
  if (!options_.static_dir.empty() && !server_->set_mount_point("/", options_.static_dir)) {
    spdlog::warn("static directory {} not mounted", options_.static_dir);
  }
}

bool Service::serve() {
  const auto [host, port] = options_.host_port();
  install_routes();
  spdlog::info("listening on {}:{}", host, port);
  return server_->listen(host, port);
}

int Service::start_background() {
  const auto [host, port] = options_.host_port();
  install_routes();
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) return -1;
  worker_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Service::stop() {
  if (server_) server_->stop();
  if (worker_.joinable()) worker_.join();
}

}  // namespace lifesat
