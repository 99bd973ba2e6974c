// Copyright 2026 The Satpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SATPATH_CLI_H_
#define SATPATH_CLI_H_

namespace satpath {

// Exit codes.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

// Subcommands: gen, path, eval, solve, compile-kstep, check-topology, report.
int CliMain(int argc, char** argv);

}  // namespace satpath

#endif  // SATPATH_CLI_H_
