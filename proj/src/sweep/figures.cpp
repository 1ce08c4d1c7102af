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

#include "qbatt/sweep/figures.hpp"

#include <functional>
#include <map>
#include <tuple>
#include <utility>

#include "qbatt/metrics.hpp"
#include "qbatt/steady.hpp"
#include "qbatt/sweep/csv.hpp"
#include "qbatt/sweep/optimize.hpp"
#include "qbatt/sweep/parallel.hpp"

namespace qbatt::sweep {

namespace {

constexpr double kG = 0.01;  // charger-battery coupling, units of omega0

using Task = std::function<std::vector<FigureRow>()>;

struct Recipe {
    std::string title;
    std::vector<std::string> notes;
    std::vector<Task> tasks;
};

std::vector<double> linspace(double lo, double hi, int n) {
    Axis a{"", lo, hi, n, false};
    return a.values();
}

std::vector<double> logspace(double lo, double hi, int n) {
    Axis a{"", lo, hi, n, true};
    return a.values();
}

SystemParams point_params(ReservoirKind kind, double T, double gammaB_g) {
    SystemParams p;
    p.omega0 = 1.0;
    p.g = kG;
    p.gammaC = 2.0 * kG;
    p.gammaB = gammaB_g * kG;
    p.delta = 1.0;
    p.eta = 1.0;
    p.reservoir = kind;
    p.T = T;
    return p;
}

std::string series_T(double T) { return "T=" + format_double(T); }

FigureRow make_row(std::string panel, std::string series, std::string x1_name, double x1,
                   std::string x2_name = {}, std::optional<double> x2 = std::nullopt,
                   std::string x3_name = {}, std::optional<double> x3 = std::nullopt) {
    FigureRow r;
    r.panel = std::move(panel);
    r.series = std::move(series);
    r.x1_name = std::move(x1_name);
    r.x1 = x1;
    r.x2_name = std::move(x2_name);
    r.x2 = x2;
    r.x3_name = std::move(x3_name);
    r.x3 = x3;
    return r;
}

double metric(const BatteryMetrics& m, const std::string& name) {
    if (name == "E") return m.stored_energy;
    if (name == "ergotropy") return m.ergotropy;
    if (name == "R") return m.efficiency_R;
    if (name == "density") return m.energy_density;
    return m.avg_ergotropy;
}

// Evaluates `eval` once and emits one row per quantity; on failure every
// row carries the error code.
Task point(FigureRow proto, std::vector<std::string> quantities,
           std::function<std::vector<double>()> eval) {
    return [proto = std::move(proto), quantities = std::move(quantities),
            eval = std::move(eval)] {
        std::vector<double> vals;
        std::string status = "ok";
        try {
            vals = eval();
        } catch (const Error& e) {
            status = std::string(to_string(e.code()));
        }
        std::vector<FigureRow> rows;
        for (std::size_t q = 0; q < quantities.size(); ++q) {
            FigureRow r = proto;
            r.quantity = quantities[q];
            if (status == "ok") {
                r.value = vals[q];
            } else {
                r.status = status;
            }
            rows.push_back(std::move(r));
        }
        return rows;
    };
}

struct Panel {
    std::string label;
    double T;
    std::string quantity;
};

Recipe surface(ReservoirKind kind, const std::vector<Panel>& panels,
               const ModelConvention& conv) {
    Recipe r;
    r.title = std::string(to_string(kind)) + " steady state over (gammaC, delta), gammaB = 0.1g";
    r.notes.push_back("series 'optimum' is the two-stage grid-search maximum over gammaC and delta");
    for (const Panel& pan : panels) {
        for (double gc : linspace(0.5, 6.0, 41)) {
            for (double d : linspace(0.0, 2.0, 41)) {
                FigureRow proto = make_row(pan.label, series_T(pan.T), "gammaC", gc, "delta", d);
                r.tasks.push_back(point(proto, {pan.quantity}, [=] {
                    SystemParams p = point_params(kind, pan.T, 0.1);
                    p.gammaC = gc * kG;
                    p.delta = d;
                    return std::vector<double>{
                        metric(steady_metrics(p, default_basis(p), conv), pan.quantity)};
                }));
            }
        }
        r.tasks.push_back([=] {
            FigureRow row = make_row(pan.label, "optimum", "gammaC", 0.0, "delta", std::nullopt);
            row.quantity = pan.quantity;
            try {
                const SystemParams p = point_params(kind, pan.T, 0.1);
                const OptimizeResult o = optimize(
                    p, true, pan.quantity == "E" ? Objective::E : Objective::Ergotropy,
                    default_basis(p), conv);
                row.x1 = o.gammaC / kG;
                row.x2 = o.delta;
                row.value = o.value;
            } catch (const Error& e) {
                row.status = std::string(to_string(e.code()));
            }
            return std::vector<FigureRow>{row};
        });
    }
    return r;
}

Recipe volume(ReservoirKind kind, const std::vector<Panel>& panels, const ModelConvention& conv) {
    Recipe r;
    r.title = std::string(to_string(kind)) + " steady state over (delta, gammaB, gammaC)";
    r.notes.push_back("grid 21 x 21 x 21; gammaB log-spaced in [0.01g, g]");
    for (const Panel& pan : panels) {
        for (double d : linspace(0.0, 2.0, 21)) {
            for (double gb : logspace(0.01, 1.0, 21)) {
                for (double gc : linspace(0.5, 6.0, 21)) {
                    FigureRow proto = make_row(pan.label, series_T(pan.T), "delta", d, "gammaB", gb,
                                    "gammaC", gc);
                    r.tasks.push_back(point(proto, {pan.quantity}, [=] {
                        SystemParams p = point_params(kind, pan.T, gb);
                        p.gammaC = gc * kG;
                        p.delta = d;
                        return std::vector<double>{
                            metric(steady_metrics(p, default_basis(p), conv), pan.quantity)};
                    }));
                }
            }
        }
    }
    return r;
}

Recipe energy_vs_gammaB(ReservoirKind kind, const std::vector<double>& temps,
                        const ModelConvention& conv) {
    Recipe r;
    r.title = std::string(to_string(kind)) +
              " stored energy vs gammaB at gammaC = 2g, delta = 1";
    r.notes.push_back("E is the numeric steady state; E_closed the optimal-point closed form");
    for (double T : temps) {
        for (double gb : linspace(0.0, 2.0, 81)) {
            FigureRow proto = make_row("a", series_T(T), "gammaB", gb);
            r.tasks.push_back(point(proto, {"E", "E_closed"}, [=] {
                const SystemParams p = point_params(kind, T, gb);
                return std::vector<double>{steady_metrics(p, default_basis(p), conv).stored_energy,
                                           stored_energy_optimal(p)};
            }));
        }
    }
    return r;
}

Recipe ergotropy_vs_gammaB(ReservoirKind kind, const std::vector<double>& temps,
                           const ModelConvention& conv) {
    Recipe r;
    r.title = std::string(to_string(kind)) +
              " ergotropy vs gammaB at gammaC = 2g, maximized over delta";
    r.notes.push_back("optimal_delta is the inset; status 'flat' marks points where the "
                      "ergotropy is the same (zero) for every delta, so no optimal delta exists");
    r.notes.push_back("gammaB starts at 0.05g: at gammaB = 0 and delta != 1 the steady state is "
                      "not unique");
    for (double T : temps) {
        for (double gb : linspace(0.05, 2.0, 40)) {
            FigureRow proto = make_row("a", series_T(T), "gammaB", gb);
            r.tasks.push_back([=] {
                FigureRow erg = proto;
                erg.quantity = "ergotropy";
                FigureRow opt = proto;
                opt.quantity = "optimal_delta";
                const SystemParams p = point_params(kind, T, gb);
                try {
                    try {
                        const OptimizeResult o =
                            optimize_delta(p, Objective::Ergotropy, default_basis(p), conv);
                        erg.value = o.value;
                        opt.value = o.delta;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::FlatObjective) throw;
                        erg.value = steady_metrics(p, default_basis(p), conv).ergotropy;
                        opt.status = kFlatStatus;
                    }
                } catch (const Error& e) {
                    erg.status = opt.status = std::string(to_string(e.code()));
                    erg.value.reset();
                }
                return std::vector<FigureRow>{erg, opt};
            });
        }
    }
    return r;
}

Recipe efficiency_vs_T(ReservoirKind kind, const ModelConvention& conv) {
    Recipe r;
    r.title = std::string(to_string(kind)) +
              " charging efficiency vs T at gammaC = 2g, delta = 1, gammaB = 0.1g";
    for (double T : linspace(0.1, 50.0, 100)) {
        FigureRow proto = make_row("a", "feedback", "T", T);
        r.tasks.push_back(point(proto, {"R", "E", "ergotropy"}, [=] {
            const SystemParams p = point_params(kind, T, 0.1);
            const BatteryMetrics m = steady_metrics(p, default_basis(p), conv);
            return std::vector<double>{m.efficiency_R, m.stored_energy, m.ergotropy};
        }));
    }
    return r;
}

// Multiparticle quantity vs N with panels over J and series over T.
Recipe vs_particles(ReservoirKind kind, double gammaB_g, const std::string& quantity,
                    const ModelConvention& conv) {
    const std::vector<double> temps = kind == ReservoirKind::Bosonic
                                          ? std::vector<double>{0.0, 1.0, 10.0, 50.0}
                                          : std::vector<double>{0.0, 0.5, 1.0, 10.0};
    const std::vector<std::pair<std::string, double>> js{{"a", 0.0}, {"b", 0.1}, {"c", 1.0}};
    const bool with_gc = quantity != "R";
    const Objective obj = quantity == "avg_ergotropy" ? Objective::Ergotropy : Objective::E;
    Recipe r;
    r.title = std::string(to_string(kind)) + " multiparticle " + quantity + " vs N, gammaB = " +
              format_double(gammaB_g) + "g, delta = 1, optimized gammaC";
    r.notes.push_back("N range 1..10 is a default; the source plots do not state it");
    r.notes.push_back(std::string("gammaC maximizes ") +
                      (obj == Objective::E ? "the stored energy" : "the ergotropy") +
                      " at each point");
    if (with_gc) r.notes.push_back("panels d-f: optimal_gammaC (units of g) for panels a-c");
    for (const auto& [label, J] : js) {
        for (double T : temps) {
            for (int N = 1; N <= 10; ++N) {
                FigureRow proto = make_row(label, series_T(T), "N", double(N), "J", J);
                const std::string gc_panel(1, static_cast<char>(label[0] + 3));
                r.tasks.push_back([=] {
                    std::vector<FigureRow> rows;
                    FigureRow row = proto;
                    row.quantity = quantity;
                    FigureRow gc_row = proto;
                    gc_row.panel = gc_panel;
                    gc_row.quantity = "optimal_gammaC";
                    try {
                        SystemParams p = point_params(kind, T, gammaB_g);
                        p.N = N;
                        p.J = J * kG;
                        const OptimizeResult o = optimize(p, false, obj, default_basis(p), conv);
                        row.value = metric(o.metrics, quantity);
                        gc_row.value = o.gammaC / kG;
                    } catch (const Error& e) {
                        row.status = gc_row.status = std::string(to_string(e.code()));
                    }
                    rows.push_back(row);
                    if (with_gc) rows.push_back(gc_row);
                    return rows;
                });
            }
        }
    }
    return r;
}

Recipe vs_interaction(ReservoirKind kind, const ModelConvention& conv) {
    const std::vector<std::tuple<std::string, int, double>> panels{
        {"a", 3, 0.05}, {"b", 3, 0.5}, {"c", 5, 0.05}, {"d", 5, 0.5}};
    Recipe r;
    r.title = std::string(to_string(kind)) +
              " energy density and average ergotropy vs J, delta = 1, optimized gammaC";
    r.notes.push_back("panels: a N=3 gammaB=0.05g; b N=3 gammaB=0.5g; c N=5 gammaB=0.05g; "
                      "d N=5 gammaB=0.5g");
    r.notes.push_back("density uses the energy-optimal gammaC, avg_ergotropy the "
                      "ergotropy-optimal gammaC");
    for (const auto& [label, N, gb] : panels) {
        for (double T : {0.0, 10.0}) {
            for (double J : linspace(0.0, 1.0, 21)) {
                FigureRow proto = make_row(label, series_T(T), "J", J, "N", double(N), "gammaB", gb);
                r.tasks.push_back(point(proto, {"density", "avg_ergotropy"}, [=] {
                    SystemParams p = point_params(kind, T, gb);
                    p.N = N;
                    p.J = J * kG;
                    const BasisSpec b = default_basis(p);
                    const OptimizeResult oe = optimize(p, false, Objective::E, b, conv);
                    const OptimizeResult ow = optimize(p, false, Objective::Ergotropy, b, conv);
                    return std::vector<double>{oe.metrics.energy_density,
                                               ow.metrics.avg_ergotropy};
                }));
            }
        }
    }
    return r;
}

Recipe reference_comparison(const ModelConvention& conv) {
    Recipe r;
    r.title = "fermionic E and ergotropy vs T: feedback scheme vs coherently driven reference";
    r.notes.push_back("feedback: gammaC = 2g, delta = 1, gammaB = 0.1g");
    r.notes.push_back("reference (inset): F = gammaC = 4g, isolated battery");
    for (double T : linspace(0.0, 50.0, 101)) {
        r.tasks.push_back(point(make_row("main", "feedback", "T", T), {"E", "ergotropy"}, [=] {
            const SystemParams p = point_params(ReservoirKind::Fermionic, T, 0.1);
            const BatteryMetrics m = steady_metrics(p, default_basis(p), conv);
            return std::vector<double>{m.stored_energy, m.ergotropy};
        }));
        r.tasks.push_back(point(make_row("inset", "reference", "T", T), {"E", "ergotropy"}, [=] {
            ReferenceParams rp;
            rp.F = 4.0 * kG;
            rp.gammaC = 4.0 * kG;
            rp.g = kG;
            rp.n_f = occupation(ReservoirKind::Fermionic, T);
            const ReferenceResult res = reference_scheme(rp);
            return std::vector<double>{res.stored_energy, res.ergotropy};
        }));
    }
    return r;
}

Recipe make_recipe(const std::string& id, const ModelConvention& conv) {
    const auto B = ReservoirKind::Bosonic;
    const auto F = ReservoirKind::Fermionic;
    if (id == "fig2") return surface(B, {{"a", 0.0, "E"}, {"b", 10.0, "E"}}, conv);
    if (id == "fig3") return volume(B, {{"a", 0.0, "E"}, {"b", 10.0, "E"}}, conv);
    if (id == "fig4") return energy_vs_gammaB(B, {0.0, 1.0, 10.0, 50.0}, conv);
    if (id == "fig5") return surface(B, {{"a", 0.0, "ergotropy"}, {"b", 10.0, "ergotropy"}}, conv);
    if (id == "fig6") return volume(B, {{"a", 0.0, "ergotropy"}, {"b", 10.0, "ergotropy"}}, conv);
    if (id == "fig7") return ergotropy_vs_gammaB(B, {0.0, 1.0, 10.0, 50.0}, conv);
    if (id == "fig8") return efficiency_vs_T(B, conv);
    if (id == "fig9") return surface(F, {{"a", 10.0, "E"}, {"b", 10.0, "ergotropy"}}, conv);
    if (id == "fig10") return volume(F, {{"a", 10.0, "E"}, {"b", 10.0, "ergotropy"}}, conv);
    if (id == "fig11") return energy_vs_gammaB(F, {0.0, 0.5, 1.0, 10.0}, conv);
    if (id == "fig12") return ergotropy_vs_gammaB(F, {0.0, 0.5, 1.0, 10.0}, conv);
    if (id == "fig13") return efficiency_vs_T(F, conv);
    if (id == "fig14") return vs_particles(B, 0.05, "density", conv);
    if (id == "fig15") return vs_particles(B, 0.05, "avg_ergotropy", conv);
    if (id == "fig16") return vs_particles(B, 0.05, "R", conv);
    if (id == "fig17") return vs_interaction(B, conv);
    if (id == "fig18") return vs_particles(F, 0.05, "density", conv);
    if (id == "fig19") return vs_particles(F, 0.05, "avg_ergotropy", conv);
    if (id == "fig20") return vs_particles(F, 0.05, "R", conv);
    if (id == "fig21") return vs_interaction(F, conv);
    if (id == "figB22") return reference_comparison(conv);
    if (id == "fig23") return vs_particles(B, 0.5, "density", conv);
    if (id == "fig24") return vs_particles(B, 0.5, "avg_ergotropy", conv);
    if (id == "fig25") return vs_particles(B, 0.5, "R", conv);
    if (id == "fig26") return vs_particles(F, 0.5, "density", conv);
    if (id == "fig27") return vs_particles(F, 0.5, "avg_ergotropy", conv);
    if (id == "fig28") return vs_particles(F, 0.5, "R", conv);
    throw Error(ErrorCode::UnknownFigure, "figure_id: unknown figure '" + id + "'");
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{
        "fig2",  "fig3",  "fig4",  "fig5",  "fig6",   "fig7",  "fig8",  "fig9",  "fig10",
        "fig11", "fig12", "fig13", "fig14", "fig15",  "fig16", "fig17", "fig18", "fig19",
        "fig20", "fig21", "figB22", "fig23", "fig24", "fig25", "fig26", "fig27", "fig28"};
    return ids;
}

FigureData build_figure(const std::string& id, unsigned threads, const ModelConvention& conv) {
    Recipe recipe = make_recipe(id, conv);
    std::vector<std::vector<FigureRow>> parts(recipe.tasks.size());
    parallel_for(recipe.tasks.size(), threads, [&](std::size_t i) { parts[i] = recipe.tasks[i](); });
    FigureData data;
    data.id = id;
    data.title = std::move(recipe.title);
    data.notes = std::move(recipe.notes);
    data.notes.push_back("g = 0.01 omega0");
    for (auto& part : parts) {
        for (auto& row : part) data.rows.push_back(std::move(row));
    }
    return data;
}

}  // namespace qbatt::sweep
