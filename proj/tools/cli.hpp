// Copyright 2026 The cluemark Authors
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

#ifndef CLUEMARK_TOOLS_CLI_HPP
#define CLUEMARK_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cluemark::cli {

/// Exit codes of the `extract` verifier; other commands return 0 or kError.
inline constexpr int kDetected = 0;
inline constexpr int kNotDetected = 1;
inline constexpr int kError = 2;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cluemark::cli

#endif  // CLUEMARK_TOOLS_CLI_HPP
