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

#include "qbatt/sweep/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "qbatt/error.hpp"

namespace qbatt::sweep {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[40];
    // Start at the integer-digit count so that e.g. 50 prints as "50", not "5e+01".
    const int int_digits = static_cast<int>(std::floor(std::log10(std::abs(x)))) + 1;
    for (int p = std::clamp(int_digits, 1, 12); p <= 12; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvTable::add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

void CsvTable::write(std::ostream& out) const {
    for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << csv_escape(columns[i]);
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
        out << '\n';
    }
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + path + "'");
    write(f);
    f.flush();
    if (!f) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

}  // namespace qbatt::sweep
