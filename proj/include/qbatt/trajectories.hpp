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
#include <string_view>
#include <utility>
#include <vector>

#include "qbatt/linalg.hpp"
#include "qbatt/model.hpp"

namespace qbatt {

/// How one time step of the conditioned state is taken.
///
/// ConditionalKraus (default) folds the instantaneous feedback into the
/// measured channel: with F = -s (f / sqrt(Gamma_C)) sigma_C^y the conditioned
/// state obeys the homodyne filter for c' = c - iF and H' = H + (Fc + c^dag F)/2,
/// which is the zero-delay limit of measuring and then rotating. The step is
/// a second-order Kraus map, so states stay positive and the weak error is
/// small at dt = 1e-3 / Gamma_C.
///
/// MeasureThenAct applies a first-order measurement Kraus update followed
/// by the feedback rotation exp(i s theta sigma_C^y), theta = f r dt, using
/// the same noise increment. Its ensemble mean carries an O(dt) bias.
enum class TrajectoryScheme { ConditionalKraus, MeasureThenAct };

/// Gaussian draws dw ~ N(0, dt). Zero forces dw = 0 and averages the
/// measured channel, which reduces the step to a deterministic Lindblad step.
/// Under MeasureThenAct that step lacks the feedback diffusion (it comes from
/// the squared noise), so only ConditionalKraus reproduces the master equation.
enum class NoiseMode { Gaussian, Zero };

std::string_view to_string(TrajectoryScheme scheme) noexcept;

struct TrajectoryConfig {
    SystemParams params;
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t ensemble_size = 1;
    std::uint64_t seed = 0;
    double tau = 0.0;  // feedback delay; only 0 is supported
    std::size_t record_every = 1;
    TrajectoryScheme scheme = TrajectoryScheme::ConditionalKraus;
    NoiseMode noise = NoiseMode::Gaussian;
    std::optional<ComplexMatrix> rho0;  // defaults to |gg><gg|
    ModelConvention convention;
    unsigned threads = 1;  // 0 = hardware concurrency
};

struct TrajectoryRecord {
    std::vector<double> times;
    // Photocurrent r averaged over each recording window (r dt summed / window).
    std::vector<double> photocurrent;
    // (charger excited, battery excited) populations at each recorded time.
    std::vector<std::pair<double, double>> populations;
    ComplexMatrix final_state;
    double min_eigenvalue = 0.0;  // smallest eigenvalue seen at positivity checks
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<double> mean_charger;
    std::vector<double> se_charger;
    std::vector<double> mean_battery;
    std::vector<double> se_battery;
    std::vector<double> mean_photocurrent;
    std::vector<double> se_photocurrent;
    std::size_t ensemble_size = 0;
};

/// Sub-seed of trajectory `index` (splitmix64 of the counter).
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Name of the generator recorded in output metadata.
std::string_view rng_name() noexcept;

/// Single trajectory using the stream of trajectory_seed(cfg.seed, 0).
TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg);
/// Single trajectory with an explicit stream seed.
TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg, std::uint64_t stream_seed);

/// Mean and standard error over cfg.ensemble_size trajectories. Work is split
/// into fixed blocks whose partial sums are combined in index order, so the
/// result does not depend on the thread count.
EnsembleResult ensemble_average(const TrajectoryConfig& cfg);

}  // namespace qbatt
