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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qbatt/model.hpp"
#include "qbatt/trajectories.hpp"

namespace qbatt::sweep {

enum class Mode { Steady, Dynamics, Trajectories, Sweep2d, Optimize, Figure, Audit, Reference };

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view name);

enum class Output { E, Ergotropy, R, Density, AvgErgotropy, OptimalGammaC };

std::string_view to_string(Output out) noexcept;

enum class Objective { E, Ergotropy };

std::string_view to_string(Objective obj) noexcept;

enum class BasisChoice { Auto, TwoQubit, Dicke, Full };

struct Axis {
    std::string name;  // delta, gammaC, gammaB, T, n, J, N, F
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    bool log_scale = false;

    std::vector<double> values() const;
};

struct OptimizeSpec {
    bool free_delta = false;
    Objective objective = Objective::E;
};

struct DynamicsSpec {
    std::optional<double> dt;  // units of 1/g; default from dynamics::default_dt
    double t_max = 50.0;       // units of 1/g
    std::size_t record_every = 100;
};

struct TrajectorySpec {
    double dt = 1e-3;      // units of 1/gammaC
    double t_max = 30.0;   // units of 1/g
    std::size_t ensemble_size = 2000;
    std::size_t record_every = 1000;
    TrajectoryScheme scheme = TrajectoryScheme::ConditionalKraus;
};

struct ReferenceSpec {
    double F = 4.0;       // units of g
    double gammaC = 4.0;  // units of g
};

/// Model parameters as written in a config: g in units of omega0, the
/// rates gammaC, gammaB and J in units of g.
struct BaseSpec {
    double g = 0.01;
    double gammaC = 2.0;
    double gammaB = 0.1;
    double J = 0.0;
    double delta = 1.0;
    double eta = 1.0;
    ReservoirKind reservoir = ReservoirKind::Bosonic;
    double T = 0.0;
    std::optional<double> n;
    int N = 1;

    /// Absolute-unit parameters (omega0 = 1).
    SystemParams to_params() const;
};

struct SweepConfig {
    Mode mode = Mode::Steady;
    BaseSpec base;
    BasisChoice basis = BasisChoice::Auto;
    std::vector<Axis> axes;
    std::vector<Output> outputs;
    std::optional<std::string> figure_id;
    OptimizeSpec optimize;
    DynamicsSpec dynamics;
    TrajectorySpec trajectories;
    ReferenceSpec reference;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool flip_feedback_sign = false;  // mutation testing only
};

/// Throws Error(ConfigError) naming the offending field.
SweepConfig parse_config(const nlohmann::json& j, std::optional<Mode> cli_mode = std::nullopt);
SweepConfig load_config(const std::string& path, std::optional<Mode> cli_mode = std::nullopt);

/// Canonical JSON (sorted keys, every field explicit). parse_config of the
/// result yields the same configuration.
nlohmann::json to_json(const SweepConfig& cfg);

/// 64-bit FNV-1a of the canonical JSON text.
std::uint64_t config_hash(const SweepConfig& cfg);

/// Outputs used when the config lists none.
std::vector<Output> default_outputs(Mode mode);

/// Applies an axis value (config units). `F` is rejected here; the
/// reference mode handles it.
void apply_axis(BaseSpec& base, std::string_view axis, double value);

BasisSpec resolve_basis(BasisChoice choice, const SystemParams& params);

}  // namespace qbatt::sweep
