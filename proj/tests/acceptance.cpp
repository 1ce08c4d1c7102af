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

// Acceptance runner: one PASS/FAIL line per criterion, exit status = number
// of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qbatt/metrics.hpp"
#include "qbatt/model.hpp"
#include "qbatt/steady.hpp"
#include "qbatt/sweep/config.hpp"
#include "qbatt/sweep/csv.hpp"
#include "qbatt/sweep/optimize.hpp"
#include "qbatt/sweep/run.hpp"
#include "qbatt/trajectories.hpp"

using namespace qbatt;
using namespace qbatt::sweep;

namespace {

constexpr double kG = 0.01;
unsigned g_threads = 1;

struct Outcome {
    bool pass = true;
    std::string detail;
};

SystemParams point(ReservoirKind kind, double n, double gammaB_g) {
    SystemParams p;
    p.g = kG;
    p.gammaC = 2.0 * kG;
    p.gammaB = gammaB_g * kG;
    p.delta = 1.0;
    p.reservoir = kind;
    p.n = n;
    return p;
}

std::string fmt(double x) { return format_double(x); }

BatteryMetrics metrics(const SystemParams& p) { return steady_metrics(p, default_basis(p)); }

// ---------------------------------------------------------------------------

Outcome full_charge() {
    Outcome o;
    double worst = 0.0;
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        for (double n : {0.0, 0.3}) {
            for (double gc : {0.5, 2.0, 7.0}) {
                SystemParams p = point(kind, n, 0.0);
                p.gammaC = gc * kG;
                if (stored_energy_closed(p) != 1.0 || stored_energy_optimal(p) != 1.0) o.pass = false;
                worst = std::max(worst, std::abs(metrics(p).stored_energy - 1.0));
            }
        }
    }
    o.pass = o.pass && worst <= 1e-9;
    o.detail = "analytic exact; max |E_num - omega0| = " + fmt(worst);
    return o;
}

template <typename Fn>
void grid_375(ReservoirKind kind, Fn&& fn) {
    const std::vector<double> ns = kind == ReservoirKind::Bosonic
                                       ? std::vector<double>{0.0, 0.5, 9.51}
                                       : std::vector<double>{0.0, 0.475, 0.5};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k)
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

Outcome analytic_numeric() {
    Outcome o;
    std::ostringstream d;
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        double worst = 0.0;
        std::size_t count = 0;
        grid_375(kind, [&](const SystemParams& p) {
            worst = std::max(worst, max_abs_diff(steady_analytic(p).rho_inf,
                                                 steady_numeric(p, BasisSpec::two_qubit()).rho_inf));
            ++count;
        });
        o.pass = o.pass && count == 375 && worst <= 1e-9;
        d << to_string(kind) << " " << count << " points max dev " << fmt(worst) << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome optimum_recovery() {
    Outcome o;
    const double log_step = std::log(kGammaCMax / kGammaCMin) / (kGammaCPoints - 1) / 10.0;
    double worst = 0.0;
    const std::vector<std::pair<ReservoirKind, double>> cases{
        {ReservoirKind::Bosonic, 0.0}, {ReservoirKind::Bosonic, 9.51}, {ReservoirKind::Fermionic, 0.475}};
    std::ostringstream d;
    for (const auto& [kind, n] : cases) {
        for (Objective obj : {Objective::E, Objective::Ergotropy}) {
            const OptimizeResult r = optimize(point(kind, n, 0.1), true, obj, BasisSpec::two_qubit());
            const double dg = std::abs(std::log(r.gammaC / (2.0 * kG))) / log_step;
            const double dd = std::abs(r.delta - 1.0) / kDeltaFineStep;
            worst = std::max({worst, dg, dd});
            d << "(" << fmt(r.gammaC / kG) << "g," << fmt(r.delta) << ") ";
        }
    }
    o.pass = worst <= 1.0;
    o.detail = "argmax " + d.str() + "max offset " + fmt(worst) + " refined steps";
    return o;
}

Outcome saturation() {
    const double e = stored_energy_optimal(point(ReservoirKind::Bosonic, 1e4, 10.0));
    return {std::abs(e - 0.5) <= 1e-3, "E/omega0 = " + fmt(e)};
}

double numeric_critical(ReservoirKind kind, double n) {
    auto charged = [&](double gb) { return metrics(point(kind, n, gb)).stored_energy > 0.5; };
    double lo = 0.0, hi = 100.0;
    if (!charged(lo) || charged(hi)) return std::nan("");
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        (charged(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Outcome critical() {
    Outcome o;
    std::ostringstream d;
    double worst = 0.0;
    const std::vector<std::pair<ReservoirKind, std::vector<double>>> cases{
        {ReservoirKind::Bosonic, {0.0, 1.58, 9.51}}, {ReservoirKind::Fermionic, {0.0, 0.27, 0.475}}};
    for (const auto& [kind, ns] : cases) {
        std::vector<double> crit;
        for (double n : ns) {
            const double ref = critical_gammaB(kind, n);
            const double num = numeric_critical(kind, n);
            // The zero-crossing of the ergotropy: positive just below, zero just above.
            const double below = metrics(point(kind, n, ref * (1 - 1e-5))).ergotropy;
            const double past = metrics(point(kind, n, ref * (1 + 1e-5))).ergotropy;
            if (!(below > 1e-9) || past > 1e-14) o.pass = false;
            worst = std::max(worst, std::isfinite(num) ? std::abs(num - ref) : INFINITY);
            crit.push_back(num);
        }
        for (std::size_t i = 1; i < crit.size(); ++i) {
            const bool ok = kind == ReservoirKind::Bosonic ? crit[i] < crit[i - 1] : crit[i] > crit[i - 1];
            o.pass = o.pass && ok;
        }
        d << to_string(kind) << " {" << fmt(crit[0]) << ", " << fmt(crit[1]) << ", " << fmt(crit[2]) << "}g; ";
    }
    o.pass = o.pass && worst <= 1e-6;
    o.detail = d.str() + "max |num - formula| = " + fmt(worst) + "g";
    return o;
}

Outcome efficiency_trend() {
    Outcome o;
    std::ostringstream d;
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        std::vector<double> r;
        for (int i = 0; i < 20; ++i) {
            SystemParams p = point(kind, 0.0, 0.1);
            p.n.reset();
            p.T = 0.1 + (50.0 - 0.1) * i / 19.0;
            r.push_back(metrics(p).efficiency_R);
        }
        for (std::size_t i = 1; i < r.size(); ++i) {
            o.pass = o.pass && (kind == ReservoirKind::Bosonic ? r[i] < r[i - 1] : r[i] > r[i - 1]);
        }
        d << to_string(kind) << " R " << fmt(r.front()) << " -> " << fmt(r.back()) << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome zero_temperature() {
    double worst = 0.0;
    for (double gb : {0.05, 0.1, 0.5, 2.0}) {
        for (double delta : {0.3, 1.0, 1.7}) {
            SystemParams pb = point(ReservoirKind::Bosonic, 0.0, gb);
            pb.n.reset();
            pb.T = 0.0;
            pb.delta = delta;
            SystemParams pf = pb;
            pf.reservoir = ReservoirKind::Fermionic;
            const BasisSpec b = BasisSpec::two_qubit();
            const Liouvillian lb = build_liouvillian(pb, b);
            const Liouvillian lf = build_liouvillian(pf, b);
            const BatteryMetrics mb = metrics(pb);
            const BatteryMetrics mf = metrics(pf);
            worst = std::max({worst, max_abs_diff(lb.matrix, lf.matrix),
                              max_abs_diff(steady_numeric(lb).rho_inf, steady_numeric(lf).rho_inf),
                              std::abs(mb.stored_energy - mf.stored_energy),
                              std::abs(mb.ergotropy - mf.ergotropy),
                              std::abs(mb.efficiency_R - mf.efficiency_R),
                              std::abs(mb.energy_density - mf.energy_density),
                              std::abs(mb.avg_ergotropy - mf.avg_ergotropy)});
        }
    }
    return {worst <= 1e-12, "max deviation " + fmt(worst)};
}

Outcome dicke_full() {
    double worst = 0.0;
    for (int N : {2, 3}) {
        for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
            for (double J : {0.0, 0.1, 1.0}) {
                SystemParams p = point(kind, kind == ReservoirKind::Bosonic ? 1.58 : 0.27, 0.05);
                p.N = N;
                p.J = J * kG;
                const BatteryMetrics a = steady_metrics(p, BasisSpec::dicke(N));
                const BatteryMetrics b = steady_metrics(p, BasisSpec::full(N));
                worst = std::max({worst, std::abs(a.stored_energy - b.stored_energy),
                                  std::abs(a.energy_density - b.energy_density),
                                  std::abs(a.avg_ergotropy - b.avg_ergotropy)});
            }
        }
    }
    return {worst <= 1e-8, "max |Dicke - full| over E, density, avg ergotropy = " + fmt(worst)};
}

// Best value of `objective` over gammaC; a flat objective means every grid
// point gives the same value, so any point represents it.
BatteryMetrics best(SystemParams p, Objective objective) {
    try {
        return optimize(p, false, objective, default_basis(p)).metrics;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::FlatObjective) throw;
        p.gammaC = 2.0 * kG;
        return metrics(p);
    }
}

SystemParams multi(ReservoirKind kind, int N, double J_g, double gammaB_g, double T) {
    SystemParams p = point(kind, 0.0, gammaB_g);
    p.n.reset();
    p.T = T;
    p.N = N;
    p.J = J_g * kG;
    return p;
}

Outcome multiparticle_trends() {
    Outcome o;
    int checked = 0;
    std::ostringstream d;
    const std::vector<double> fermi_T{0.0, 0.5, 1.0, 10.0};
    const std::vector<double> bose_T{0.0, 1.0, 10.0, 50.0};
    for (double J : {0.0, 0.1}) {
        for (int N = 1; N <= 6; ++N) {
            double prev_density = -INFINITY, prev_avg = -INFINITY;
            for (double T : fermi_T) {
                const SystemParams p = multi(ReservoirKind::Fermionic, N, J, 0.05, T);
                const double density = best(p, Objective::E).energy_density;
                const double avg = best(p, Objective::Ergotropy).avg_ergotropy;
                if (!(density > prev_density) || !(avg > prev_avg)) {
                    o.pass = false;
                    d << "fermionic N=" << N << " J=" << fmt(J) << "g T=" << fmt(T) << " breaks; ";
                }
                prev_density = density;
                prev_avg = avg;
                checked += 2;
            }
            double prev = INFINITY;
            for (double T : bose_T) {
                const double density = best(multi(ReservoirKind::Bosonic, N, J, 0.05, T), Objective::E).energy_density;
                if (!(density < prev)) {
                    o.pass = false;
                    d << "bosonic N=" << N << " J=" << fmt(J) << "g T=" << fmt(T) << " breaks; ";
                }
                prev = density;
                ++checked;
            }
        }
    }
    o.detail = d.str() + std::to_string(checked) + " points, fermionic T {0, 0.5, 1, 10}, bosonic T {0, 1, 10, 50}";
    return o;
}

Outcome interaction_penalty() {
    Outcome o;
    std::ostringstream d;
    double margin = INFINITY;
    for (ReservoirKind kind : {ReservoirKind::Bosonic, ReservoirKind::Fermionic}) {
        for (int N : {3, 5}) {
            for (double gb : {0.05, 0.5}) {
                for (double T : {0.0, 10.0}) {
                    const SystemParams free = multi(kind, N, 0.0, gb, T);
                    const SystemParams coupled = multi(kind, N, 1.0, gb, T);
                    const double dd = best(free, Objective::E).energy_density -
                                      best(coupled, Objective::E).energy_density;
                    const double da = best(free, Objective::Ergotropy).avg_ergotropy -
                                      best(coupled, Objective::Ergotropy).avg_ergotropy;
                    margin = std::min({margin, dd, da});
                    if (dd < -1e-10 || da < -1e-10) {
                        o.pass = false;
                        d << to_string(kind) << " N=" << N << " gammaB=" << fmt(gb) << "g T=" << fmt(T)
                          << " breaks; ";
                    }
                }
            }
        }
    }
    o.detail = d.str() + "min (J=0 minus J=g) = " + fmt(margin);
    return o;
}

Outcome reference_trend() {
    Outcome o;
    ReferenceParams rp;
    rp.F = 4.0 * kG;
    rp.gammaC = 4.0 * kG;
    rp.g = kG;
    double prev = INFINITY;
    for (int i = 0; i <= 200; ++i) {
        const double T = 50.0 * i / 200.0;
        rp.n_f = occupation(ReservoirKind::Fermionic, T);
        const double erg = reference_scheme(rp).ergotropy;
        if (i > 0 && !(erg < prev)) o.pass = false;
        prev = erg;
    }
    rp.n_f = 0.4999;
    const ReferenceResult r = reference_scheme(rp);
    o.pass = o.pass && std::abs(r.stored_energy - 0.5) <= 1e-3 && r.ergotropy <= 1e-3;
    o.detail = "ergotropy strictly decreasing on T in [0, 50]; at n_f = 0.4999 E = " + fmt(r.stored_energy) +
               ", ergotropy = " + fmt(r.ergotropy);
    return o;
}

Outcome trajectories() {
    TrajectoryConfig cfg;
    cfg.params = point(ReservoirKind::Bosonic, 0.0, 0.1);
    cfg.dt = 1e-3 / cfg.params.gammaC;
    cfg.steps = static_cast<std::size_t>(std::llround(30.0 / kG / cfg.dt));
    cfg.ensemble_size = 2000;
    cfg.record_every = cfg.steps;
    cfg.seed = 0;
    cfg.threads = g_threads;
    const EnsembleResult ens = ensemble_average(cfg);
    const ComplexMatrix ss = steady_numeric(cfg.params, BasisSpec::two_qubit()).rho_inf;
    const double target = ss(0, 0).real() + ss(2, 2).real();
    const double z = std::abs(ens.mean_battery.back() - target) / ens.se_battery.back();
    return {z <= 3.0, "M = 2000, seed 0: mean " + fmt(ens.mean_battery.back()) + " vs steady " + fmt(target) +
                          ", " + fmt(z) + " SE"};
}

std::string render(const SweepConfig& cfg) {
    const RunResult r = execute(cfg);
    std::ostringstream s;
    r.table.write(s);
    return s.str();
}

Outcome determinism() {
    using nlohmann::json;
    const std::vector<std::pair<Mode, json>> runs{
        {Mode::Steady, {{"base", {{"reservoir", "fermionic"}, {"T", 3}}}}},
        {Mode::Sweep2d,
         {{"axes", {{{"name", "gammaC"}, {"min", 0.5}, {"max", 6}, {"points", 9}},
                    {{"name", "delta"}, {"min", 0}, {"max", 2}, {"points", 9}}}}}},
        {Mode::Optimize,
         {{"base", {{"N", 3}, {"J", 0.1}}}, {"axes", {{{"name", "T"}, {"min", 0}, {"max", 10}, {"points", 3}}}}}},
        {Mode::Reference, {{"axes", {{{"name", "T"}, {"min", 0}, {"max", 50}, {"points", 11}}}}}},
        {Mode::Dynamics, {{"dynamics", {{"t_max", 20}}}}},
        {Mode::Trajectories, {{"seed", 17}, {"trajectories", {{"t_max", 3}, {"ensemble_size", 24}}}}},
        {Mode::Figure, {{"figure_id", "fig8"}}},
        {Mode::Audit, json::object()},
    };
    Outcome o;
    std::ostringstream d;
    for (const auto& [mode, j] : runs) {
        SweepConfig cfg = parse_config(j, mode);
        const std::string a = render(cfg);
        const std::string b = render(cfg);
        cfg.threads = g_threads == 1 ? 2 : g_threads;
        const std::string c = render(cfg);
        const bool same = a == b && a == c && !a.empty();
        o.pass = o.pass && same;
        d << to_string(mode) << (same ? " ok" : " DIFFERS") << "; ";
    }
    o.detail = d.str() + "repeat and thread-count reruns";
    return o;
}

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds; <= 0 when no bound is set
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--threads" && i + 1 < argc) {
            g_threads = static_cast<unsigned>(std::strtoul(argv[++i], nullptr, 10));
        } else {
            std::fprintf(stderr, "usage: %s [--threads N]\n", argv[0]);
            return 125;
        }
    }
    const std::vector<Criterion> criteria{
        {1, "full_charge_limit", 1.0, full_charge},
        {2, "analytic_numeric_agreement", 30.0, analytic_numeric},
        {3, "optimal_parameter_recovery", 60.0, optimum_recovery},
        {4, "bosonic_high_temperature_saturation", 0.0, saturation},
        {5, "critical_dissipation_rates", 0.0, critical},
        {6, "efficiency_temperature_trends", 10.0, efficiency_trend},
        {7, "zero_temperature_coincidence", 0.0, zero_temperature},
        {8, "dicke_reduction", 0.0, dicke_full},
        {9, "multiparticle_trends", 300.0, multiparticle_trends},
        {10, "interaction_penalty", 0.0, interaction_penalty},
        {11, "reference_scheme", 0.0, reference_trend},
        {12, "trajectory_consistency", 300.0, trajectories},
        {13, "determinism", 0.0, determinism},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0.0 && secs > c.time_limit) {
            o.pass = false;
            o.detail += " [over time limit " + fmt(c.time_limit) + " s]";
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
