// Copyright 2026 The chembias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// The chembias command line: generate, extract-groups, stats, score, audit.

#ifndef CHEMBIAS_CLI_H_
#define CHEMBIAS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace chembias {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. Returns the process exit status:
// 0 on success, 1 on a runtime or data failure, 2 on a usage or config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace chembias

#endif  // CHEMBIAS_CLI_H_
