/*
   Copyright 2026 The da_guard Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace da_guard::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line. Results go to `out` as one JSON document; errors go
/// to `err` as {"error": {"type", "message"}} with a nonzero return value.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv adapter for main().
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace da_guard::cli
