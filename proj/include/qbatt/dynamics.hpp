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
#include <optional>
#include <vector>

#include "qbatt/metrics.hpp"
#include "qbatt/model.hpp"
#include "qbatt/steady.hpp"

namespace qbatt {

struct EvolutionRecord {
    std::vector<double> times;  // absolute time (1/omega0 units)
    std::vector<ComplexMatrix> states;
    std::vector<BatteryMetrics> observables;  // empty unless metrics were requested
};

struct EvolveOptions {
    std::size_t record_every = 1;  // keep every k-th step (the final state is always kept)
    bool store_states = true;
    // When set, BatteryMetrics are evaluated for every recorded state.
    std::optional<SystemParams> metrics_params;
};

/// Row-sum norm of L; used as the spectral-radius bound for step control.
double spectral_bound(const Liouvillian& liouvillian);

/// Largest step accepted by evolve(): 0.05 / ||L||_inf.
double max_stable_dt(const Liouvillian& liouvillian);

/// min(0.01 / max(Gamma_C, Gamma_B (1 + 2n), g, f, J), max_stable_dt(L)).
double default_dt(const SystemParams& params, const Liouvillian& liouvillian);

/// Fixed-step classical RK4 on vec(rho). For a linear generator the four
/// stages collapse into one propagator I + hL + (hL)^2/2 + (hL)^3/6 +
/// (hL)^4/24, which is formed once and applied per step.
EvolutionRecord evolve(const Liouvillian& liouvillian, const ComplexMatrix& rho0, double dt,
                       double t_max, const EvolveOptions& opts = {});

/// Integrates until ||d rho/dt||_F <= tol. Throws NotConverged at t_cap.
SteadyReport evolve_to_steady(const Liouvillian& liouvillian, const ComplexMatrix& rho0,
                              double dt, double tol = 1e-10, double t_cap = 1e6);

}  // namespace qbatt
