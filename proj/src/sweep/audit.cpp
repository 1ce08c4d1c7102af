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

#include "qbatt/sweep/audit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "qbatt/dynamics.hpp"
#include "qbatt/metrics.hpp"
#include "qbatt/steady.hpp"
#include "qbatt/sweep/csv.hpp"
#include "qbatt/sweep/optimize.hpp"
#include "qbatt/trajectories.hpp"

namespace qbatt::sweep {

int AuditReport::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                          [](const AuditCheck& c) { return !c.passed; }));
}

namespace {

constexpr double kG = 0.01;

SystemParams optimal_point(ReservoirKind kind, double n, double gammaB_g) {
    SystemParams p;
    p.g = kG;
    p.gammaC = 2.0 * kG;
    p.gammaB = gammaB_g * kG;
    p.delta = 1.0;
    p.reservoir = kind;
    p.n = n;
    return p;
}

AuditCheck make_check(std::string name, double tolerance) {
    AuditCheck c;
    c.name = std::move(name);
    c.tolerance = tolerance;
    return c;
}

double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs_diff(a, b); }

// The shared analytic-vs-numeric grid: 5 delta x 5 gammaC x 5 gammaB x 3 n.
template <typename Fn>
void for_each_grid_point(ReservoirKind kind, Fn&& fn) {
    const std::vector<double> ns = kind == ReservoirKind::Bosonic
                                       ? std::vector<double>{0.0, 0.5, 9.51}
                                       : std::vector<double>{0.0, 0.475, 0.5};
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            for (int k = 0; k < 5; ++k) {
                for (double n : ns) {
                    SystemParams p;
                    p.g = kG;
                    p.delta = 0.5 * i;
                    p.gammaC = (0.5 + 9.5 * j / 4.0) * kG;
                    p.gammaB = (0.01 + 0.99 * k / 4.0) * kG;
                    p.reservoir = kind;
                    p.n = n;
                    fn(p);
                }
            }
        }
    }
}

AuditCheck analytic_vs_numeric(const ModelConvention& conv) {
    AuditCheck c = make_check("analytic_vs_numeric_steady_state", 1e-9);
    std::size_t points = 0;
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        for_each_grid_point(kind, [&](const SystemParams& p) {
            const ComplexMatrix a = steady_analytic(p).rho_inf;
            const ComplexMatrix b = steady_numeric(p, BasisSpec::two_qubit(), conv).rho_inf;
            c.residual = std::max(c.residual, max_entry_diff(a, b));
            ++points;
        });
    }
    c.detail = std::to_string(points) + " points, max entrywise |analytic - numeric|";
    return c;
}

AuditCheck closed_energy(const ModelConvention& conv) {
    AuditCheck c = make_check("closed_form_stored_energy", 1e-9);
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        for_each_grid_point(kind, [&](const SystemParams& p) {
            const BasisSpec b = BasisSpec::two_qubit();
            const double num = steady_metrics(p, b, conv).stored_energy;
            c.residual = std::max(c.residual, std::abs(num - stored_energy_closed(p)));
        });
    }
    c.detail = "max |E closed form - E numeric| over the analytic grid";
    return c;
}

AuditCheck full_charge(const ModelConvention& conv) {
    AuditCheck c = make_check("full_charge_limit", 1e-9);
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        for (double gc : {0.5, 2.0, 7.0}) {
            SystemParams p = optimal_point(kind, 0.0, 0.0);
            p.gammaC = gc * kG;
            const double e = steady_metrics(p, BasisSpec::two_qubit(), conv).stored_energy;
            c.residual = std::max(c.residual, std::abs(e - 1.0));
            c.residual = std::max(c.residual, std::abs(stored_energy_closed(p) - 1.0));
        }
    }
    c.detail = "gammaB = 0, delta = 1: |E - omega0|";
    return c;
}

AuditCheck optimal_point_closed_forms(const ModelConvention& conv) {
    AuditCheck c = make_check("optimal_point_closed_forms", 1e-9);
    const std::vector<std::pair<ReservoirKind, std::vector<double>>> cases{
        {ReservoirKind::Bosonic, {0.0, 1.58, 9.51}},
        {ReservoirKind::Fermionic, {0.0, 0.27, 0.475}}};
    for (const auto& [kind, ns] : cases) {
        for (double n : ns) {
            for (double gb : {0.0, 0.05, 0.1, 0.3, 0.7, 1.5, 4.0, 10.0}) {
                const SystemParams p = optimal_point(kind, n, gb);
                const BatteryMetrics m = steady_metrics(p, BasisSpec::two_qubit(), conv);
                c.residual = std::max(c.residual, std::abs(m.stored_energy - stored_energy_optimal(p)));
                c.residual = std::max(c.residual, std::abs(m.ergotropy - ergotropy_closed(p)));
            }
        }
    }
    c.detail = "E and ergotropy at gammaC = 2g, delta = 1 vs closed forms";
    return c;
}

// Gamma_B (units of g) where the numeric ergotropy at the optimal point
// switches off; bisects the battery population through 1/2.
double numeric_critical(ReservoirKind kind, double n, const ModelConvention& conv) {
    auto above = [&](double gb) {
        const SystemParams p = optimal_point(kind, n, gb);
        return steady_metrics(p, BasisSpec::two_qubit(), conv).stored_energy > 0.5;
    };
    double lo = 0.0;
    double hi = 100.0;
    if (!above(lo) || above(hi)) return std::nan("");
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

AuditCheck critical_rates(const ModelConvention& conv) {
    AuditCheck c = make_check("critical_dissipation_rate", 1e-6);
    std::ostringstream d;
    const std::vector<std::pair<ReservoirKind, std::vector<double>>> cases{
        {ReservoirKind::Bosonic, {0.0, 1.58, 9.51}},
        {ReservoirKind::Fermionic, {0.0, 0.27, 0.475}}};
    for (const auto& [kind, ns] : cases) {
        for (double n : ns) {
            const double num = numeric_critical(kind, n, conv);
            const double ref = critical_gammaB(kind, n);
            const double dev = std::isfinite(num) ? std::abs(num - ref) : INFINITY;
            c.residual = std::max(c.residual, dev);
            // Ergotropy must vanish just above the critical rate and not below.
            const BasisSpec b = BasisSpec::two_qubit();
            const double below = steady_metrics(optimal_point(kind, n, ref * (1 - 1e-5)), b, conv).ergotropy;
            const double past = steady_metrics(optimal_point(kind, n, ref * (1 + 1e-5)), b, conv).ergotropy;
            if (!(below > 1e-9) || past > 1e-14) c.residual = INFINITY;
        }
    }
    c.detail = "max |numeric - closed-form critical gammaB| in units of g";
    return c;
}

AuditCheck dicke_vs_full(const ModelConvention& conv) {
    AuditCheck c = make_check("dicke_vs_full_product", 1e-8);
    for (int N : {2, 3}) {
        for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
            SystemParams p = optimal_point(kind, kind == ReservoirKind::Bosonic ? 1.58 : 0.27, 0.05);
            p.N = N;
            p.J = 0.1 * kG;
            const BatteryMetrics a = steady_metrics(p, BasisSpec::dicke(N), conv);
            const BatteryMetrics b = steady_metrics(p, BasisSpec::full(N), conv);
            c.residual = std::max({c.residual, std::abs(a.stored_energy - b.stored_energy),
                                   std::abs(a.energy_density - b.energy_density),
                                   std::abs(a.avg_ergotropy - b.avg_ergotropy)});
        }
    }
    c.detail = "N = 2, 3: E, density, average ergotropy";
    return c;
}

AuditCheck rk4_vs_kernel(const ModelConvention& conv) {
    AuditCheck c = make_check("rk4_vs_steady_state", 1e-9);
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        const SystemParams p = optimal_point(kind, kind == ReservoirKind::Bosonic ? 9.51 : 0.475, 0.1);
        const BasisSpec b = BasisSpec::two_qubit();
        const Liouvillian l = build_liouvillian(p, b, conv);
        const double dt = std::min(0.5, max_stable_dt(l));
        EvolveOptions eo;
        eo.record_every = 1u << 30;
        const EvolutionRecord rec = evolve(l, ground_state(b), dt, 60.0 / kG, eo);
        const ComplexMatrix ss = steady_numeric(l).rho_inf;
        c.residual = std::max(c.residual, max_entry_diff(rec.states.back(), ss));
    }
    c.detail = "|rho(t = 60/g) - rho_inf| from the ground state";
    return c;
}

AuditCheck zero_temperature(const ModelConvention& conv) {
    AuditCheck c = make_check("zero_temperature_coincidence", 1e-12);
    for (double gb : {0.05, 0.1, 0.5}) {
        SystemParams pb = optimal_point(ReservoirKind::Bosonic, 0.0, gb);
        pb.delta = 0.8;
        SystemParams pf = pb;
        pf.reservoir = ReservoirKind::Fermionic;
        const BasisSpec b = BasisSpec::two_qubit();
        const Liouvillian lb = build_liouvillian(pb, b, conv);
        const Liouvillian lf = build_liouvillian(pf, b, conv);
        const double scale = lb.matrix.max_abs();
        c.residual = std::max(c.residual, max_entry_diff(lb.matrix, lf.matrix) / scale);
        const BatteryMetrics mb = steady_metrics(pb, b, conv);
        const BatteryMetrics mf = steady_metrics(pf, b, conv);
        c.residual = std::max({c.residual, max_entry_diff(steady_numeric(lb).rho_inf, steady_numeric(lf).rho_inf),
                               std::abs(mb.stored_energy - mf.stored_energy),
                               std::abs(mb.ergotropy - mf.ergotropy),
                               std::abs(mb.efficiency_R - mf.efficiency_R)});
    }
    c.detail = "bosonic vs fermionic at n = 0: Liouvillian (relative), state, metrics";
    return c;
}

AuditCheck optimum_location(const ModelConvention& conv) {
    AuditCheck c = make_check("optimal_parameter_recovery", 1.0);
    const double log_step = std::log(kGammaCMax / kGammaCMin) / (kGammaCPoints - 1) / 10.0;
    const std::vector<std::pair<ReservoirKind, double>> cases{
        {ReservoirKind::Bosonic, 0.0}, {ReservoirKind::Bosonic, 9.51}, {ReservoirKind::Fermionic, 0.475}};
    for (const auto& [kind, n] : cases) {
        for (Objective obj : {Objective::E, Objective::Ergotropy}) {
            const SystemParams p = optimal_point(kind, n, 0.1);
            const OptimizeResult o = optimize(p, true, obj, BasisSpec::two_qubit(), conv);
            const double dg = std::abs(std::log(o.gammaC / (2.0 * kG))) / log_step;
            const double dd = std::abs(o.delta - 1.0) / kDeltaFineStep;
            c.residual = std::max({c.residual, dg, dd});
        }
    }
    c.detail = "argmax distance from (2g, 1) in refined grid steps";
    return c;
}

AuditCheck reference_limits() {
    AuditCheck c = make_check("reference_scheme_limits", 1e-3);
    ReferenceParams rp;
    rp.F = 4.0 * kG;
    rp.gammaC = 4.0 * kG;
    rp.g = kG;
    double prev = INFINITY;
    for (int i = 0; i <= 200; ++i) {
        rp.n_f = 0.4999 * i / 200.0;
        const double erg = reference_scheme(rp).ergotropy;
        if (erg > prev + 1e-15) c.residual = INFINITY;
        prev = erg;
    }
    rp.n_f = 0.4999;
    const ReferenceResult r = reference_scheme(rp);
    c.residual = std::max({c.residual, std::abs(r.stored_energy - 0.5), r.ergotropy});
    c.detail = "ergotropy non-increasing in n_f; |E - 0.5| and ergotropy at n_f = 0.4999";
    return c;
}

AuditCheck trajectory_mean(const AuditOptions& opts) {
    AuditCheck c = make_check("trajectory_ensemble_mean", 4.0);
    TrajectoryConfig cfg;
    cfg.params = optimal_point(ReservoirKind::Bosonic, 0.0, 0.1);
    cfg.dt = 1e-3 / cfg.params.gammaC;
    cfg.steps = static_cast<std::size_t>(std::llround(30.0 / kG / cfg.dt));
    cfg.ensemble_size = opts.trajectory_ensemble;
    cfg.record_every = cfg.steps;
    cfg.seed = opts.seed;
    cfg.convention = opts.convention;
    cfg.threads = opts.threads;
    const EnsembleResult ens = ensemble_average(cfg);
    const ComplexMatrix ss = steady_numeric(cfg.params, BasisSpec::two_qubit(), opts.convention).rho_inf;
    const double target = ss(0, 0).real() + ss(2, 2).real();
    const double mean = ens.mean_battery.back();
    const double se = ens.se_battery.back();
    c.residual = std::abs(mean - target) / se;
    c.detail = "M = " + std::to_string(cfg.ensemble_size) + ", |mean - steady| / SE at t = 30/g (mean " +
               format_double(mean) + ", steady " + format_double(target) + ")";
    return c;
}

}  // namespace

AuditReport run_audit(const AuditOptions& opts) {
    const ModelConvention& conv = opts.convention;
    const std::vector<std::pair<std::string, std::function<AuditCheck()>>> checks{
        {"analytic_vs_numeric_steady_state", [&] { return analytic_vs_numeric(conv); }},
        {"closed_form_stored_energy", [&] { return closed_energy(conv); }},
        {"full_charge_limit", [&] { return full_charge(conv); }},
        {"optimal_point_closed_forms", [&] { return optimal_point_closed_forms(conv); }},
        {"critical_dissipation_rate", [&] { return critical_rates(conv); }},
        {"optimal_parameter_recovery", [&] { return optimum_location(conv); }},
        {"dicke_vs_full_product", [&] { return dicke_vs_full(conv); }},
        {"rk4_vs_steady_state", [&] { return rk4_vs_kernel(conv); }},
        {"zero_temperature_coincidence", [&] { return zero_temperature(conv); }},
        {"reference_scheme_limits", [] { return reference_limits(); }},
        {"trajectory_ensemble_mean", [&] { return trajectory_mean(opts); }},
    };
    AuditReport report;
    for (const auto& [name, fn] : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        AuditCheck c;
        try {
            c = fn();
        } catch (const Error& e) {
            c.name = name;
            c.residual = INFINITY;
            c.tolerance = 0.0;
            c.detail = e.what();
        }
        c.passed = c.residual <= c.tolerance;
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.checks.push_back(std::move(c));
    }
    return report;
}

}  // namespace qbatt::sweep
