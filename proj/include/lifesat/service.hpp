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

#ifndef LIFESAT_SERVICE_HPP_
#define LIFESAT_SERVICE_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"
#include "lifesat/artifact.hpp"

namespace httplib {
class Server;
}

namespace lifesat {

struct ServiceOptions {
  std::string artifact_path;
  std::string bind = "127.0.0.1:8080";
  std::size_t max_concurrency = 4;
  std::string static_dir;
  std::size_t explain_samples = 5000;
  std::uint64_t explain_seed = 0;
  std::size_t top_rules = 10;

  // LIFESAT_ARTIFACT, LIFESAT_BIND, LIFESAT_MAX_CONCURRENCY and
  // LIFESAT_STATIC_DIR replace the matching fields when set.
  void apply_env();
  // "host:port"; throws InvalidArgument on malformed text.
  std::pair<std::string, int> host_port() const;
};

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

class Service {
 public:
  // Loads the artifact when a path is configured. A missing or broken
  // artifact leaves the service running in degraded mode.
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResult questionnaire() const;
  HttpResult predict(const std::string& body, bool full) const;
  HttpResult health() const;

  bool ready() const { return artifact_ != nullptr; }
  const std::string& fingerprint() const { return fingerprint_; }
  const std::string& load_error() const { return load_error_; }

  // Blocks until stop(). Returns false when the address cannot be bound.
  bool serve();
  // Binds (port 0 picks a free port), serves on a background thread and
  // returns the port, or -1 on failure.
  int start_background();
  void stop();

 private:
  void install_routes();

  ServiceOptions options_;
  std::shared_ptr<const ModelArtifact> artifact_;
  std::string fingerprint_;
  std::string load_error_;
  std::string questionnaire_body_;
  std::chrono::steady_clock::time_point started_;
  std::unique_ptr<httplib::Server> server_;
  std::thread worker_;
};

}  // namespace lifesat

#endif  // LIFESAT_SERVICE_HPP_
