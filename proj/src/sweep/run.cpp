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

#include "qbatt/sweep/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

#include "qbatt/dynamics.hpp"
#include "qbatt/metrics.hpp"
#include "qbatt/steady.hpp"
#include "qbatt/sweep/audit.hpp"
#include "qbatt/sweep/figures.hpp"
#include "qbatt/sweep/optimize.hpp"
#include "qbatt/sweep/parallel.hpp"
#include "qbatt/trajectories.hpp"

namespace qbatt::sweep {

namespace {

constexpr const char* kStatusOk = "ok";

std::string hex64(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ModelConvention convention_of(const SweepConfig& cfg) {
    ModelConvention c;
    c.feedback_sign = cfg.flip_feedback_sign ? -1 : +1;
    return c;
}

CsvTable with_metadata(const SweepConfig& cfg) {
    CsvTable t;
    t.add_meta("qbatt", kVersion);
    t.add_meta("mode", std::string(to_string(cfg.mode)));
    t.add_meta("config_hash", "fnv1a64:" + hex64(config_hash(cfg)));
    t.add_meta("seed", std::to_string(cfg.seed));
    t.add_meta("solvers",
               "steady=bordered-lu (full product: spectral projection from the ground state); "
               "dynamics=rk4-fixed-step; trajectories=" +
                   std::string(to_string(cfg.trajectories.scheme)) + "; rng=" +
                   std::string(rng_name()));
    t.add_meta("units",
               "energies in omega0; gammaC, gammaB, J, F and optimal_gammaC in g; t in 1/g; "
               "T in omega0/k_B; n dimensionless");
    if (cfg.flip_feedback_sign) t.add_meta("mutation", "feedback sign flipped");
    t.add_meta("config", to_json(cfg).dump());
    return t;
}

// Cartesian product of the axes, first axis outermost.
std::vector<std::vector<double>> grid_points(const std::vector<Axis>& axes) {
    std::vector<std::vector<double>> pts{{}};
    for (const Axis& a : axes) {
        std::vector<std::vector<double>> next;
        const std::vector<double> vals = a.values();
        for (const auto& p : pts) {
            for (double v : vals) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        pts = std::move(next);
    }
    return pts;
}

double metric_of(const BatteryMetrics& m, Output o) {
    switch (o) {
        case Output::E: return m.stored_energy;
        case Output::Ergotropy: return m.ergotropy;
        case Output::R: return m.efficiency_R;
        case Output::Density: return m.energy_density;
        case Output::AvgErgotropy: return m.avg_ergotropy;
        case Output::OptimalGammaC: break;
    }
    return 0.0;
}

std::vector<Output> metric_outputs(const SweepConfig& cfg) {
    std::vector<Output> out;
    for (Output o : cfg.outputs) {
        if (o != Output::OptimalGammaC) out.push_back(o);
    }
    return out;
}

void require_no_axes(const SweepConfig& cfg) {
    if (!cfg.axes.empty()) {
        throw Error(ErrorCode::ConfigError,
                    "axes: " + std::string(to_string(cfg.mode)) + " mode takes no axes");
    }
}

void require_no_optimal_output(const SweepConfig& cfg) {
    for (std::size_t i = 0; i < cfg.outputs.size(); ++i) {
        if (cfg.outputs[i] == Output::OptimalGammaC) {
            throw Error(ErrorCode::ConfigError, "outputs[" + std::to_string(i) +
                                                    "]: optimal_gammaC needs optimize mode");
        }
    }
}

struct Row {
    std::vector<std::string> cells;
    bool ok = true;
};

// Fills `table` with one row per grid point; `eval` returns the output cells.
int grid_rows(const SweepConfig& cfg, CsvTable& table, std::size_t n_outputs,
              const std::function<std::vector<double>(const BaseSpec&)>& eval) {
    const auto pts = grid_points(cfg.axes);
    std::vector<Row> rows(pts.size());
    parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
        BaseSpec b = cfg.base;
        Row& row = rows[i];
        for (std::size_t a = 0; a < cfg.axes.size(); ++a) {
            row.cells.push_back(format_double(pts[i][a]));
        }
        std::string status = kStatusOk;
        std::vector<double> vals;
        try {
            for (std::size_t a = 0; a < cfg.axes.size(); ++a) apply_axis(b, cfg.axes[a].name, pts[i][a]);
            vals = eval(b);
        } catch (const Error& e) {
            status = std::string(to_string(e.code()));
            row.ok = false;
        }
        for (std::size_t k = 0; k < n_outputs; ++k) {
            row.cells.push_back(row.ok ? format_double(vals[k]) : std::string());
        }
        row.cells.push_back(status);
    });
    int code = kExitOk;
    for (Row& r : rows) {
        if (!r.ok) code = kExitSolver;
        table.rows.push_back(std::move(r.cells));
    }
    return code;
}

RunResult run_steady(const SweepConfig& cfg) {
    if (cfg.mode == Mode::Sweep2d && cfg.axes.empty()) {
        throw Error(ErrorCode::ConfigError, "axes: sweep2d needs at least one axis");
    }
    require_no_optimal_output(cfg);
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        if (cfg.axes[i].name == "F") {
            throw Error(ErrorCode::ConfigError, "axes[" + std::to_string(i) + "].name: F needs reference mode");
        }
    }
    RunResult r;
    r.table = with_metadata(cfg);
    const ModelConvention conv = convention_of(cfg);
    const std::vector<Output> outs = metric_outputs(cfg);
    for (const Axis& a : cfg.axes) r.table.columns.push_back(a.name);
    for (Output o : outs) r.table.columns.emplace_back(to_string(o));
    r.table.columns.emplace_back("status");
    r.exit_code = grid_rows(cfg, r.table, outs.size(), [&](const BaseSpec& b) {
        const SystemParams p = b.to_params();
        p.validate();
        const BatteryMetrics m = steady_metrics(p, resolve_basis(cfg.basis, p), conv);
        std::vector<double> v;
        for (Output o : outs) v.push_back(metric_of(m, o));
        return v;
    });
    return r;
}

RunResult run_optimize(const SweepConfig& cfg) {
    RunResult r;
    r.table = with_metadata(cfg);
    const ModelConvention conv = convention_of(cfg);
    const std::vector<Output> outs = metric_outputs(cfg);
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        const std::string& n = cfg.axes[i].name;
        if (n == "gammaC" || n == "F" || (n == "delta" && cfg.optimize.free_delta)) {
            throw Error(ErrorCode::ConfigError,
                        "axes[" + std::to_string(i) + "].name: '" + n + "' cannot be swept while optimizing");
        }
    }
    for (const Axis& a : cfg.axes) r.table.columns.push_back(a.name);
    r.table.columns.insert(r.table.columns.end(), {"optimal_gammaC", "optimal_delta", "objective"});
    for (Output o : outs) r.table.columns.emplace_back(to_string(o));
    r.table.columns.emplace_back("status");
    r.table.add_meta("objective", std::string(to_string(cfg.optimize.objective)));
    r.exit_code = grid_rows(cfg, r.table, 3 + outs.size(), [&](const BaseSpec& b) {
        const SystemParams p = b.to_params();
        p.validate();
        const OptimizeResult o =
            optimize(p, cfg.optimize.free_delta, cfg.optimize.objective, resolve_basis(cfg.basis, p), conv);
        std::vector<double> v{o.gammaC / p.g, o.delta, o.value};
        for (Output out : outs) v.push_back(metric_of(o.metrics, out));
        return v;
    });
    return r;
}

RunResult run_reference(const SweepConfig& cfg) {
    RunResult r;
    r.table = with_metadata(cfg);
    for (const Axis& a : cfg.axes) r.table.columns.push_back(a.name);
    r.table.columns.insert(r.table.columns.end(), {"n_f", "E", "ergotropy", "status"});
    r.table.add_meta("model", "coherently driven charger in a fermionic reservoir, isolated battery");
    const auto pts = grid_points(cfg.axes);
    std::vector<Row> rows(pts.size());
    parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
        ReferenceParams rp;
        rp.g = cfg.base.g;
        rp.F = cfg.reference.F * cfg.base.g;
        rp.gammaC = cfg.reference.gammaC * cfg.base.g;
        bool direct_n = cfg.base.n.has_value();
        double n = cfg.base.n.value_or(0.0);
        double T = cfg.base.T;
        Row& row = rows[i];
        for (std::size_t a = 0; a < cfg.axes.size(); ++a) {
            const double v = pts[i][a];
            row.cells.push_back(format_double(v));
            const std::string& name = cfg.axes[a].name;
            if (name == "F") rp.F = v * cfg.base.g;
            if (name == "T") {
                T = v;
                direct_n = false;
            }
            if (name == "n") {
                n = v;
                direct_n = true;
            }
        }
        rp.n_f = direct_n ? n : occupation(ReservoirKind::Fermionic, T);
        try {
            const ReferenceResult res = reference_scheme(rp);
            row.cells.insert(row.cells.end(), {format_double(rp.n_f), format_double(res.stored_energy),
                                               format_double(res.ergotropy), kStatusOk});
        } catch (const Error& e) {
            row.ok = false;
            row.cells.insert(row.cells.end(), {format_double(rp.n_f), "", "", std::string(to_string(e.code()))});
        }
    });
    for (Row& row : rows) {
        if (!row.ok) r.exit_code = kExitSolver;
        r.table.rows.push_back(std::move(row.cells));
    }
    return r;
}

RunResult run_dynamics(const SweepConfig& cfg) {
    require_no_axes(cfg);
    require_no_optimal_output(cfg);
    RunResult r;
    r.table = with_metadata(cfg);
    const ModelConvention conv = convention_of(cfg);
    const std::vector<Output> outs = metric_outputs(cfg);
    const SystemParams p = cfg.base.to_params();
    const BasisSpec basis = resolve_basis(cfg.basis, p);
    const Liouvillian l = build_liouvillian(p, basis, conv);
    const double dt = cfg.dynamics.dt ? *cfg.dynamics.dt / p.g : default_dt(p, l);
    r.table.add_meta("dt", format_double(dt * p.g) + " (1/g)");
    r.table.add_meta("initial_state", "charger and battery in the ground state");
    r.table.columns.emplace_back("t");
    for (Output o : outs) r.table.columns.emplace_back(to_string(o));
    r.table.columns.emplace_back("status");
    EvolveOptions eo;
    eo.record_every = cfg.dynamics.record_every;
    eo.store_states = false;
    eo.metrics_params = p;
    const EvolutionRecord rec = evolve(l, ground_state(basis), dt, cfg.dynamics.t_max / p.g, eo);
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        std::vector<std::string> row{format_double(rec.times[k] * p.g)};
        for (Output o : outs) row.push_back(format_double(metric_of(rec.observables[k], o)));
        row.emplace_back(kStatusOk);
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

RunResult run_trajectories(const SweepConfig& cfg) {
    require_no_axes(cfg);
    RunResult r;
    r.table = with_metadata(cfg);
    TrajectoryConfig tc;
    tc.params = cfg.base.to_params();
    tc.params.validate();
    tc.dt = cfg.trajectories.dt / tc.params.gammaC;
    if (!std::isfinite(tc.dt)) throw Error(ErrorCode::ConfigError, "base.gammaC: must be > 0 for trajectories");
    tc.steps = static_cast<std::size_t>(std::llround(cfg.trajectories.t_max / tc.params.g / tc.dt));
    tc.ensemble_size = cfg.trajectories.ensemble_size;
    tc.record_every = cfg.trajectories.record_every;
    tc.scheme = cfg.trajectories.scheme;
    tc.seed = cfg.seed;
    tc.threads = cfg.threads;
    tc.convention = convention_of(cfg);
    const EnsembleResult ens = ensemble_average(tc);
    const ComplexMatrix ss = steady_numeric(tc.params, BasisSpec::two_qubit(), tc.convention).rho_inf;
    r.table.add_meta("dt", format_double(cfg.trajectories.dt) + " (1/gammaC)");
    r.table.add_meta("ensemble_size", std::to_string(ens.ensemble_size));
    r.table.add_meta("steady_battery_excited", format_double(ss(0, 0).real() + ss(2, 2).real()));
    r.table.add_meta("steady_charger_excited", format_double(ss(0, 0).real() + ss(1, 1).real()));
    r.table.columns = {"t",           "mean_charger",     "se_charger",     "mean_battery",
                       "se_battery", "mean_photocurrent", "se_photocurrent", "status"};
    for (std::size_t k = 0; k < ens.times.size(); ++k) {
        r.table.rows.push_back({format_double(ens.times[k] * tc.params.g), format_double(ens.mean_charger[k]),
                                format_double(ens.se_charger[k]), format_double(ens.mean_battery[k]),
                                format_double(ens.se_battery[k]), format_double(ens.mean_photocurrent[k]),
                                format_double(ens.se_photocurrent[k]), kStatusOk});
    }
    return r;
}

RunResult run_figure(const SweepConfig& cfg) {
    RunResult r;
    r.table = with_metadata(cfg);
    const FigureData fig = build_figure(*cfg.figure_id, cfg.threads, convention_of(cfg));
    r.table.add_meta("figure", fig.id + " - " + fig.title);
    for (const std::string& note : fig.notes) r.table.add_meta("note", note);
    r.table.columns = {"figure", "panel", "series", "x1_name", "x1", "x2_name", "x2",
                       "x3_name", "x3", "quantity", "value", "status"};
    for (const FigureRow& row : fig.rows) {
        if (row.status != kStatusOk && row.status != kFlatStatus) r.exit_code = kExitSolver;
        r.table.rows.push_back({fig.id, row.panel, row.series, row.x1_name, format_double(row.x1),
                                row.x2_name, row.x2 ? format_double(*row.x2) : "", row.x3_name,
                                row.x3 ? format_double(*row.x3) : "", row.quantity,
                                row.value ? format_double(*row.value) : "", row.status});
    }
    return r;
}

RunResult run_audit_mode(const SweepConfig& cfg) {
    RunResult r;
    r.table = with_metadata(cfg);
    AuditOptions opts;
    opts.convention = convention_of(cfg);
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    const AuditReport report = run_audit(opts);
    r.table.columns = {"check", "residual", "tolerance", "result", "detail"};
    std::ostringstream s;
    for (const AuditCheck& c : report.checks) {
        r.table.rows.push_back({c.name, format_double(c.residual), format_double(c.tolerance),
                                c.passed ? "PASS" : "FAIL", c.detail});
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-34s residual %-12.4g tolerance %-9.3g (%.2fs) ",
                      c.passed ? "PASS" : "FAIL", c.name.c_str(), c.residual, c.tolerance, c.seconds);
        s << line << c.detail << '\n';
    }
    const int failed = report.failures();
    s << failed << " of " << report.checks.size() << " checks failed\n";
    r.summary = s.str();
    r.exit_code = std::min(failed, 125);
    return r;
}

}  // namespace

RunResult execute(const SweepConfig& cfg) {
    switch (cfg.mode) {
        case Mode::Steady:
        case Mode::Sweep2d: return run_steady(cfg);
        case Mode::Optimize: return run_optimize(cfg);
        case Mode::Reference: return run_reference(cfg);
        case Mode::Dynamics: return run_dynamics(cfg);
        case Mode::Trajectories: return run_trajectories(cfg);
        case Mode::Figure: return run_figure(cfg);
        case Mode::Audit: return run_audit_mode(cfg);
    }
    throw Error(ErrorCode::ConfigError, "mode: unsupported");
}

int run_cli(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    try {
        if (opts.config_path) {
            cfg = load_config(*opts.config_path, opts.mode);
        } else if (opts.mode == Mode::Audit) {
            cfg = parse_config(nlohmann::json::object(), opts.mode);
        } else {
            throw Error(ErrorCode::ConfigError, "--config: required for " + std::string(to_string(opts.mode)));
        }
        if (opts.seed) cfg.seed = *opts.seed;
        cfg.threads = opts.threads;
        if (opts.flip_feedback_sign) cfg.flip_feedback_sign = true;
    } catch (const Error& e) {
        err << "qbatt: " << e.what() << '\n';
        return kExitConfig;
    }

    RunResult result;
    try {
        result = execute(cfg);
    } catch (const Error& e) {
        err << "qbatt: " << e.what() << '\n';
        if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::UnknownFigure) return kExitConfig;
        return kExitSolver;
    }

    if (!result.summary.empty()) out << result.summary;
    try {
        if (opts.out) {
            result.table.write_file(*opts.out);
        } else if (cfg.mode != Mode::Audit) {
            result.table.write(out);
        }
    } catch (const Error& e) {
        err << "qbatt: " << e.what() << '\n';
        return kExitSolver;
    }
    if (result.exit_code == kExitSolver && cfg.mode != Mode::Audit) {
        err << "qbatt: some grid points failed; see the status column\n";
    }
    return result.exit_code;
}

}  // namespace qbatt::sweep
