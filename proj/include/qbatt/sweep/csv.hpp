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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qbatt::sweep {

/// Shortest "%.{p}g" rendering, p in [1, 12], that parses back to `x`;
/// values that need more digits are rounded to 12. NaN and infinities are
/// spelled nan / inf / -inf, and -0 is written as 0.
std::string format_double(double x);

/// In-memory table written as `# key: value` lines, a header row and
/// comma-separated data rows.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(std::string key, std::string value);
    void write(std::ostream& out) const;
    /// Throws Error(InvalidArgument) if the file cannot be written.
    void write_file(const std::string& path) const;
};

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

}  // namespace qbatt::sweep
