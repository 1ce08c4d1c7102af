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

#include <cstddef>

#include "qbatt/metrics.hpp"
#include "qbatt/model.hpp"
#include "qbatt/sweep/config.hpp"

namespace qbatt::sweep {

/// Steady-state energetics at one parameter point (steady_state() in the
/// given basis, then battery_metrics()).
BatteryMetrics steady_metrics(const SystemParams& params, const BasisSpec& basis,
                              const ModelConvention& conv = {});

double objective_value(const BatteryMetrics& m, Objective objective);

struct OptimizeResult {
    double gammaC = 0.0;  // absolute units
    double delta = 0.0;
    double value = 0.0;
    BatteryMetrics metrics;
    std::size_t evaluations = 0;
};

/// Two-stage grid search for the maximum of `objective`.
///
/// Coarse stage: 61 log-spaced gammaC / g in [0.2, 50] and, when
/// `free_delta`, 41 delta values in [0, 2]. Fine stage: 21 log-spaced
/// gammaC values between the coarse neighbours of the argmax (ten times
/// finer) and, when `free_delta`, delta within +-0.05 in steps of 0.005.
/// Ties go to the first point in grid order. Throws FlatObjective when the
/// coarse landscape varies by less than 1e-12.
OptimizeResult optimize(const SystemParams& base, bool free_delta, Objective objective,
                        const BasisSpec& basis, const ModelConvention& conv = {});
OptimizeResult optimize(const SystemParams& base, bool free_delta, Objective objective);

/// Same search over delta alone (41 points in [0, 2], then +-0.05 in steps
/// of 0.005) with gammaC held at base.gammaC.
OptimizeResult optimize_delta(const SystemParams& base, Objective objective,
                              const BasisSpec& basis, const ModelConvention& conv = {});

/// Grid constants, exposed for resolution checks.
inline constexpr double kGammaCMin = 0.2;   // units of g
inline constexpr double kGammaCMax = 50.0;  // units of g
inline constexpr int kGammaCPoints = 61;
inline constexpr int kDeltaPoints = 41;
inline constexpr int kRefinePoints = 21;
inline constexpr double kDeltaFineStep = 0.005;

}  // namespace qbatt::sweep
