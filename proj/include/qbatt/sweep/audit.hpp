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
#include <string>
#include <vector>

#include "qbatt/model.hpp"

namespace qbatt::sweep {

struct AuditCheck {
    std::string name;
    double residual = 0.0;   // largest deviation found
    double tolerance = 0.0;  // pass iff residual <= tolerance
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AuditReport {
    std::vector<AuditCheck> checks;
    int failures() const;
};

struct AuditOptions {
    ModelConvention convention;  // flipped only for mutation testing
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t trajectory_ensemble = 256;
};

/// Cross-validates closed forms, numeric steady states, Dicke reduction,
/// RK4 dynamics and the trajectory ensemble. Model-side computations use
/// `opts.convention`; closed forms do not depend on it.
AuditReport run_audit(const AuditOptions& opts = {});

}  // namespace qbatt::sweep
