// Copyright 2026 The qbatt Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qbatt/sweep/config.hpp"
#include "qbatt/sweep/csv.hpp"

namespace qbatt::sweep {

inline constexpr const char* kVersion = "1.0.0";

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;

struct RunResult {
    CsvTable table;
    int exit_code = kExitOk;
    std::string summary;  // human-readable report (audit) or empty
};

/// Evaluates a parsed configuration. Grid points that fail keep their row
/// with the error code in the status column and make the exit code 2; audit
/// returns the number of failed checks (capped at 125). Throws
/// Error(ConfigError) for combinations parse_config cannot rule out alone.
RunResult execute(const SweepConfig& cfg);

struct CliOptions {
    Mode mode = Mode::Steady;
    std::optional<std::string> config_path;
    std::optional<std::string> out;  // stdout when absent
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    bool flip_feedback_sign = false;
};

/// Loads, executes and writes; returns the process exit code. Messages go
/// to `err`, CSV to the --out file or `out`.
int run_cli(const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace qbatt::sweep
