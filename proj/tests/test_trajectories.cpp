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

#include <cmath>

#include "doctest.h"
#include "qbatt/dynamics.hpp"
#include "qbatt/steady.hpp"
#include "qbatt/trajectories.hpp"

using namespace qbatt;

namespace {

TrajectoryConfig base_config() {
    TrajectoryConfig c;
    c.params.g = 0.01;
    c.params.gammaC = 0.02;
    c.params.gammaB = 0.001;
    c.params.delta = 1.0;
    c.dt = 1e-3 / c.params.gammaC;
    c.steps = 4000;
    c.record_every = 1000;
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("trajectories are reproducible from the seed") {
    const TrajectoryConfig c = base_config();
    const TrajectoryRecord a = run_trajectory(c, 123);
    const TrajectoryRecord b = run_trajectory(c, 123);
    const TrajectoryRecord d = run_trajectory(c, 124);
    CHECK(a.populations == b.populations);
    CHECK(a.photocurrent == b.photocurrent);
    CHECK(a.populations.back() != d.populations.back());
    CHECK(a.times.size() == 5);
    CHECK(a.min_eigenvalue > -1e-10);
    CHECK(std::abs(a.final_state.trace() - 1.0) < 1e-10);
}

TEST_CASE("substream seeds are distinct") {
    CHECK(trajectory_seed(1, 0) != trajectory_seed(1, 1));
    CHECK(trajectory_seed(1, 0) != trajectory_seed(2, 0));
    CHECK(trajectory_seed(5, 9) == trajectory_seed(5, 9));
}

TEST_CASE("ensemble average does not depend on the thread count") {
    TrajectoryConfig c = base_config();
    c.ensemble_size = 150;
    c.threads = 1;
    const EnsembleResult a = ensemble_average(c);
    c.threads = 3;
    const EnsembleResult b = ensemble_average(c);
    CHECK(a.mean_battery == b.mean_battery);
    CHECK(a.se_battery == b.se_battery);
    CHECK(a.mean_photocurrent == b.mean_photocurrent);
    CHECK(a.ensemble_size == 150);
}

TEST_CASE("zero noise reduces the conditional scheme to the master equation") {
    TrajectoryConfig c = base_config();
    c.noise = NoiseMode::Zero;
    const TrajectoryRecord t = run_trajectory(c);
    const BasisSpec b = BasisSpec::two_qubit();
    const EvolutionRecord e = evolve(build_liouvillian(c.params, b), ground_state(b), c.dt, c.dt * c.steps);
    CHECK(max_abs_diff(t.final_state, e.states.back()) < 2e-3);

    // Measure-then-act gets its feedback diffusion only from the noise; without
    // it nothing lifts the state out of |gg>.
    c.scheme = TrajectoryScheme::MeasureThenAct;
    const TrajectoryRecord m = run_trajectory(c);
    CHECK(max_abs_diff(m.final_state, ground_state(b)) == 0.0);
}

TEST_CASE("ensemble mean tracks the deterministic population") {
    TrajectoryConfig c = base_config();
    c.ensemble_size = 200;
    c.steps = 10000;
    c.record_every = 10000;
    const EnsembleResult r = ensemble_average(c);
    const BasisSpec b = BasisSpec::two_qubit();
    const EvolutionRecord e = evolve(build_liouvillian(c.params, b), ground_state(b), c.dt, c.dt * c.steps);
    const ComplexMatrix& rho = e.states.back();
    const double target = rho(0, 0).real() + rho(2, 2).real();
    CHECK(std::abs(r.mean_battery.back() - target) < 4.0 * r.se_battery.back() + 1e-4);
}

TEST_CASE("unsupported configurations") {
    TrajectoryConfig c = base_config();
    c.params.N = 2;
    try {
        run_trajectory(c);
        FAIL("expected UnsupportedN");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedN);
    }
    c = base_config();
    c.tau = 0.1;
    CHECK_THROWS_AS(run_trajectory(c), Error);
    c = base_config();
    c.params.eta = 0.5;
    CHECK_THROWS_AS(run_trajectory(c), Error);
}
