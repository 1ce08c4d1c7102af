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
#include "qbatt/metrics.hpp"
#include "qbatt/steady.hpp"

using namespace qbatt;

namespace {

SystemParams optimal(ReservoirKind kind, double n, double gammaB_g) {
    SystemParams p;
    p.g = 0.01;
    p.gammaC = 0.02;
    p.gammaB = gammaB_g * 0.01;
    p.delta = 1.0;
    p.reservoir = kind;
    p.n = n;
    return p;
}

double battery_excited(const ComplexMatrix& rho) { return rho(0, 0).real() + rho(2, 2).real(); }

}  // namespace

TEST_CASE("optimal point at zero temperature: rational values") {
    // E = 4g^2/(2g + gammaB)^2 = 4/4.41 and ergotropy (4 - 0.4 - 0.01)/4.41.
    const SystemParams p = optimal(ReservoirKind::Bosonic, 0.0, 0.1);
    const SteadyReport num = steady_numeric(p);
    CHECK(battery_excited(num.rho_inf) == doctest::Approx(400.0 / 441.0).epsilon(1e-13));
    CHECK(stored_energy_closed(p) == doctest::Approx(400.0 / 441.0).epsilon(1e-13));
    CHECK(stored_energy_optimal(p) == doctest::Approx(400.0 / 441.0).epsilon(1e-13));
    CHECK(ergotropy_closed(p) == doctest::Approx(359.0 / 441.0).epsilon(1e-13));
    const BatteryMetrics m = battery_metrics(num.rho_inf, p, BasisSpec::two_qubit());
    CHECK(m.ergotropy == doctest::Approx(359.0 / 441.0).epsilon(1e-12));
    CHECK(m.efficiency_R == doctest::Approx(359.0 / 400.0).epsilon(1e-12));
}

TEST_CASE("full charge without battery dissipation") {
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        const SystemParams p = optimal(kind, 0.0, 0.0);
        CHECK(std::abs(battery_excited(steady_numeric(p).rho_inf) - 1.0) < 1e-9);
        CHECK(stored_energy_closed(p) == 1.0);
    }
}

TEST_CASE("closed-form steady state matches the numeric kernel") {
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        for (double d : {0.0, 0.35, 1.0, 1.7}) {
            for (double eta : {1.0, 0.6}) {
                SystemParams p = optimal(kind, kind == ReservoirKind::Bosonic ? 2.3 : 0.31, 0.37);
                p.delta = d;
                p.eta = eta;
                p.gammaC = 0.047;
                const SteadyReport a = steady_analytic(p);
                const SteadyReport n = steady_numeric(p);
                CHECK(max_abs_diff(a.rho_inf, n.rho_inf) < 1e-12);
                CHECK(a.residual < 1e-15);
                CHECK(std::abs(a.rho_inf.trace() - 1.0) < 1e-13);
                CHECK(stored_energy_closed(p) == doctest::Approx(battery_excited(n.rho_inf)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("high-temperature bosonic saturation") {
    const SystemParams p = optimal(ReservoirKind::Bosonic, 1e4, 10.0);
    CHECK(std::abs(stored_energy_optimal(p) - 0.5) < 1e-3);
}

TEST_CASE("critical dissipation rates") {
    CHECK(critical_gammaB(ReservoirKind::Bosonic, 0.0) == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)));
    CHECK(critical_gammaB(ReservoirKind::Fermionic, 0.0) == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)));
    // Bosonic decreasing, fermionic increasing in the occupation.
    CHECK(critical_gammaB(ReservoirKind::Bosonic, 1.58) < critical_gammaB(ReservoirKind::Bosonic, 0.0));
    CHECK(critical_gammaB(ReservoirKind::Fermionic, 0.27) > critical_gammaB(ReservoirKind::Fermionic, 0.0));
    CHECK_THROWS_AS(critical_gammaB(ReservoirKind::Fermionic, 0.5), Error);
    // The closed-form ergotropy switches off exactly there.
    const double gc = critical_gammaB(ReservoirKind::Bosonic, 1.58);
    CHECK(ergotropy_closed(optimal(ReservoirKind::Bosonic, 1.58, gc * 0.999)) > 0.0);
    CHECK(ergotropy_closed(optimal(ReservoirKind::Bosonic, 1.58, gc * 1.001)) == 0.0);
}

TEST_CASE("ergotropy closed form only at the optimal point") {
    const SystemParams p = optimal(ReservoirKind::Bosonic, 0.0, 0.1);
    try {
        ergotropy_closed(p, false);
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
    SystemParams q = p;
    q.N = 2;
    CHECK_THROWS_AS(steady_analytic(q), Error);
}

TEST_CASE("full-product kernel is degenerate; projection from the ground state is not") {
    SystemParams p = optimal(ReservoirKind::Bosonic, 0.5, 0.05);
    p.N = 3;
    try {
        steady_numeric(p, BasisSpec::full(3));
        FAIL("expected DegenerateSteadyState");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateSteadyState);
    }
    const SteadyReport full = steady_state(p, BasisSpec::full(3));
    const SteadyReport dicke = steady_state(p, BasisSpec::dicke(3));
    const BatteryMetrics a = battery_metrics(full.rho_inf, p, BasisSpec::full(3));
    const BatteryMetrics b = battery_metrics(dicke.rho_inf, p, BasisSpec::dicke(3));
    CHECK(std::abs(a.stored_energy - b.stored_energy) < 1e-10);
    CHECK(std::abs(a.ergotropy - b.ergotropy) < 1e-10);
}

TEST_CASE("reference scheme limits") {
    ReferenceParams rp;
    rp.F = 0.04;
    rp.gammaC = 0.04;
    rp.g = 0.01;
    double prev = reference_scheme(rp).ergotropy;
    CHECK(prev > 0.0);
    for (double n : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49}) {
        rp.n_f = n;
        const double e = reference_scheme(rp).ergotropy;
        CHECK(e <= prev);
        prev = e;
    }
    rp.n_f = 0.4999;
    CHECK(std::abs(reference_scheme(rp).stored_energy - 0.5) < 1e-3);
    rp.n_f = 0.5;
    CHECK_THROWS_AS(reference_scheme(rp), Error);
}
