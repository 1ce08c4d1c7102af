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

#include <optional>
#include <string>
#include <vector>

#include "qbatt/model.hpp"

namespace qbatt::sweep {

/// One value of a figure in long format. Rates and J are in units of g,
/// temperatures in omega0 / k_B, energies in omega0.
struct FigureRow {
    std::string panel;
    std::string series;
    std::string x1_name;
    double x1 = 0.0;
    std::string x2_name;
    std::optional<double> x2;
    std::string x3_name;
    std::optional<double> x3;
    std::string quantity;
    std::optional<double> value;  // empty when status is not "ok"
    std::string status = "ok";
};

/// Status of a row whose optimum is undefined because the objective is flat;
/// not an error.
inline constexpr const char* kFlatStatus = "flat";

struct FigureData {
    std::string id;
    std::string title;
    std::vector<std::string> notes;
    std::vector<FigureRow> rows;
};

/// Known figure identifiers, in caption order.
const std::vector<std::string>& figure_ids();

/// Evaluates a figure recipe. Throws UnknownFigure for other ids. Points
/// that fail keep their row with the error code as status.
FigureData build_figure(const std::string& id, unsigned threads = 1,
                        const ModelConvention& conv = {});

}  // namespace qbatt::sweep
