// Copyright 2026 The Panokit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PANOKIT_TOOLS_CLI_H_
#define PANOKIT_TOOLS_CLI_H_

#include <iosfwd>

namespace panokit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitEnvironmentError = 2;

// Entry point of the `panokit` tool. Human-readable summaries go to `out`,
// diagnostics to `err`; machine-readable results go to the --out path.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace panokit::cli

#endif  // PANOKIT_TOOLS_CLI_H_
