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

#ifndef LIFESAT_TOOLS_CLI_HPP_
#define LIFESAT_TOOLS_CLI_HPP_

namespace lifesat::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage error.
int run(int argc, char** argv);

}  // namespace lifesat::cli

#endif  // LIFESAT_TOOLS_CLI_HPP_
