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

#include "qbatt/sweep/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qbatt::sweep {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 8> kModes{{
    {Mode::Steady, "steady"},
    {Mode::Dynamics, "dynamics"},
    {Mode::Trajectories, "trajectories"},
    {Mode::Sweep2d, "sweep2d"},
    {Mode::Optimize, "optimize"},
    {Mode::Figure, "figure"},
    {Mode::Audit, "audit"},
    {Mode::Reference, "reference"},
}};

constexpr std::array<std::pair<Output, std::string_view>, 6> kOutputs{{
    {Output::E, "E"},
    {Output::Ergotropy, "ergotropy"},
    {Output::R, "R"},
    {Output::Density, "density"},
    {Output::AvgErgotropy, "avg_ergotropy"},
    {Output::OptimalGammaC, "optimal_gammaC"},
}};

constexpr std::array<std::string_view, 8> kAxisNames{"delta", "gammaC", "gammaB", "T",
                                                     "n",     "J",      "N",      "F"};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ConfigError, field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(where.empty() ? "config" : where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + key, "must be finite");
    return x;
}

std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& where,
                       std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
        fail(where + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + key, "expected a string");
    return v.get<std::string>();
}

BaseSpec parse_base(const json& j) {
    reject_unknown(j, "base",
                   {"g", "gammaC", "gammaB", "J", "delta", "eta", "reservoir", "T", "n", "N"});
    const std::string w = "base.";
    BaseSpec b;
    b.g = get_number(j, "g", w, b.g);
    b.gammaC = get_number(j, "gammaC", w, b.gammaC);
    b.gammaB = get_number(j, "gammaB", w, b.gammaB);
    b.J = get_number(j, "J", w, b.J);
    b.delta = get_number(j, "delta", w, b.delta);
    b.eta = get_number(j, "eta", w, b.eta);
    const std::string res = get_string(j, "reservoir", w, "bosonic");
    if (res == "bosonic") {
        b.reservoir = ReservoirKind::Bosonic;
    } else if (res == "fermionic") {
        b.reservoir = ReservoirKind::Fermionic;
    } else {
        fail("base.reservoir", "expected \"bosonic\" or \"fermionic\"");
    }
    if (j.contains("T") && j.contains("n")) fail("base.n", "give either T or n, not both");
    b.T = get_number(j, "T", w, b.T);
    if (j.contains("n")) b.n = get_number(j, "n", w, 0.0);
    const std::uint64_t n_particles = get_uint(j, "N", w, 1);
    if (n_particles < 1 || n_particles > 64) fail("base.N", "must lie in [1, 64]");
    b.N = static_cast<int>(n_particles);
    if (!(b.g > 0.0)) fail("base.g", "must be > 0");
    try {
        b.to_params().validate();
    } catch (const Error& e) {
        fail("base", e.what());
    }
    return b;
}

Axis parse_axis(const json& j, std::size_t index) {
    const std::string where = "axes[" + std::to_string(index) + "]";
    reject_unknown(j, where, {"name", "min", "max", "points", "scale"});
    const std::string w = where + ".";
    Axis a;
    if (!j.contains("name")) fail(w + "name", "required");
    a.name = get_string(j, "name", w, "");
    if (std::find(kAxisNames.begin(), kAxisNames.end(), a.name) == kAxisNames.end()) {
        fail(w + "name", "unknown axis '" + a.name + "'");
    }
    if (!j.contains("min") || !j.contains("max") || !j.contains("points")) {
        fail(where, "min, max and points are required");
    }
    a.min = get_number(j, "min", w, 0.0);
    a.max = get_number(j, "max", w, 0.0);
    const std::uint64_t pts = get_uint(j, "points", w, 2);
    if (pts < 2 || pts > 1000000) fail(w + "points", "must be >= 2");
    a.points = static_cast<int>(pts);
    if (!(a.min < a.max)) fail(where, "min must be < max");
    const std::string scale = get_string(j, "scale", w, "linear");
    if (scale == "log") {
        a.log_scale = true;
        if (!(a.min > 0.0)) fail(w + "min", "log scale needs min > 0");
    } else if (scale != "linear") {
        fail(w + "scale", "expected \"linear\" or \"log\"");
    }
    if (a.name == "N") {
        if (a.log_scale) fail(w + "scale", "N axis must be linear");
        for (double v : a.values()) {
            if (std::abs(v - std::round(v)) > 1e-9 || v < 1.0) {
                fail(where, "N axis must step through positive integers");
            }
        }
    }
    return a;
}

template <typename E, std::size_t K>
std::string_view lookup_name(const std::array<std::pair<E, std::string_view>, K>& table, E e) {
    for (const auto& [k, name] : table) {
        if (k == e) return name;
    }
    return "unknown";
}

}  // namespace

std::string_view to_string(Mode mode) noexcept { return lookup_name(kModes, mode); }

Mode parse_mode(std::string_view name) {
    for (const auto& [m, n] : kModes) {
        if (n == name) return m;
    }
    throw Error(ErrorCode::ConfigError, "mode: unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Output out) noexcept { return lookup_name(kOutputs, out); }

std::string_view to_string(Objective obj) noexcept {
    return obj == Objective::E ? "E" : "ergotropy";
}

std::vector<double> Axis::values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        if (i == 0) {
            v[0] = min;
        } else if (i == points - 1) {
            v[static_cast<std::size_t>(i)] = max;
        } else if (log_scale) {
            v[static_cast<std::size_t>(i)] = min * std::pow(max / min, t);
        } else {
            v[static_cast<std::size_t>(i)] = min + (max - min) * t;
        }
    }
    return v;
}

SystemParams BaseSpec::to_params() const {
    SystemParams p;
    p.omega0 = 1.0;
    p.g = g;
    p.gammaC = gammaC * g;
    p.gammaB = gammaB * g;
    p.J = J * g;
    p.delta = delta;
    p.eta = eta;
    p.reservoir = reservoir;
    p.T = T;
    p.n = n;
    p.N = N;
    return p;
}

std::vector<Output> default_outputs(Mode mode) {
    std::vector<Output> out{Output::E, Output::Ergotropy, Output::R, Output::Density,
                            Output::AvgErgotropy};
    if (mode == Mode::Optimize) out.push_back(Output::OptimalGammaC);
    return out;
}

void apply_axis(BaseSpec& base, std::string_view axis, double value) {
    if (axis == "delta") {
        base.delta = value;
    } else if (axis == "gammaC") {
        base.gammaC = value;
    } else if (axis == "gammaB") {
        base.gammaB = value;
    } else if (axis == "J") {
        base.J = value;
    } else if (axis == "T") {
        base.T = value;
        base.n.reset();
    } else if (axis == "n") {
        base.n = value;
    } else if (axis == "N") {
        base.N = static_cast<int>(std::lround(value));
    } else {
        throw Error(ErrorCode::ConfigError,
                    "axes: axis '" + std::string(axis) + "' is not a model parameter here");
    }
}

BasisSpec resolve_basis(BasisChoice choice, const SystemParams& params) {
    switch (choice) {
        case BasisChoice::Auto: return default_basis(params);
        case BasisChoice::TwoQubit: return BasisSpec::two_qubit();
        case BasisChoice::Dicke: return BasisSpec::dicke(params.N);
        case BasisChoice::Full: return BasisSpec::full(params.N);
    }
    return default_basis(params);
}

SweepConfig parse_config(const json& j, std::optional<Mode> cli_mode) {
    reject_unknown(j, "",
                   {"mode", "base", "basis", "axes", "outputs", "figure_id", "optimize",
                    "dynamics", "trajectories", "reference", "seed", "mutation"});
    SweepConfig c;
    if (j.contains("mode")) {
        c.mode = parse_mode(get_string(j, "mode", "", ""));
        if (cli_mode && *cli_mode != c.mode) {
            fail("mode", "config says '" + std::string(to_string(c.mode)) +
                             "' but the command line asks for '" +
                             std::string(to_string(*cli_mode)) + "'");
        }
    } else if (cli_mode) {
        c.mode = *cli_mode;
    } else {
        fail("mode", "required when not given on the command line");
    }

    if (j.contains("base")) c.base = parse_base(j.at("base"));

    const std::string basis = get_string(j, "basis", "", "auto");
    if (basis == "auto") {
        c.basis = BasisChoice::Auto;
    } else if (basis == "two_qubit") {
        c.basis = BasisChoice::TwoQubit;
    } else if (basis == "dicke") {
        c.basis = BasisChoice::Dicke;
    } else if (basis == "full") {
        c.basis = BasisChoice::Full;
    } else {
        fail("basis", "expected auto, two_qubit, dicke or full");
    }

    if (j.contains("axes")) {
        const json& axes = j.at("axes");
        if (!axes.is_array()) fail("axes", "expected an array");
        if (axes.size() > 3) fail("axes", "at most 3 axes are supported");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            Axis a = parse_axis(axes[i], i);
            if (!seen.insert(a.name).second) fail("axes[" + std::to_string(i) + "].name", "duplicate axis");
            c.axes.push_back(std::move(a));
        }
    }
    for (std::size_t i = 0; i < c.axes.size(); ++i) {
        const std::string& name = c.axes[i].name;
        const std::string where = "axes[" + std::to_string(i) + "].name";
        if (name == "F" && c.mode != Mode::Reference) fail(where, "F is only valid in reference mode");
        if (c.mode == Mode::Reference && name != "F" && name != "T" && name != "n") {
            fail(where, "reference mode sweeps F, T or n only");
        }
        if (name == "N" && c.basis == BasisChoice::TwoQubit) fail(where, "N axis needs a multiparticle basis");
    }
    if (c.mode == Mode::Sweep2d && c.axes.empty()) fail("axes", "sweep2d needs at least one axis");

    if (j.contains("outputs")) {
        const json& outs = j.at("outputs");
        if (!outs.is_array()) fail("outputs", "expected an array");
        for (std::size_t i = 0; i < outs.size(); ++i) {
            const std::string where = "outputs[" + std::to_string(i) + "]";
            if (!outs[i].is_string()) fail(where, "expected a string");
            const std::string name = outs[i].get<std::string>();
            bool found = false;
            for (const auto& [o, n] : kOutputs) {
                if (n == name) {
                    c.outputs.push_back(o);
                    found = true;
                }
            }
            if (!found) fail(where, "unknown output '" + name + "'");
        }
    }
    if (c.outputs.empty()) c.outputs = default_outputs(c.mode);

    if (j.contains("figure_id")) c.figure_id = get_string(j, "figure_id", "", "");
    if (c.mode == Mode::Figure && !c.figure_id) fail("figure_id", "required in figure mode");

    if (j.contains("optimize")) {
        const json& o = j.at("optimize");
        reject_unknown(o, "optimize", {"free", "objective"});
        if (o.contains("free")) {
            const json& f = o.at("free");
            if (!f.is_array()) fail("optimize.free", "expected an array");
            std::set<std::string> names;
            for (const auto& x : f) {
                if (!x.is_string()) fail("optimize.free", "expected strings");
                names.insert(x.get<std::string>());
            }
            if (names == std::set<std::string>{"gammaC"}) {
                c.optimize.free_delta = false;
            } else if (names == std::set<std::string>{"gammaC", "delta"}) {
                c.optimize.free_delta = true;
            } else {
                fail("optimize.free", "expected [\"gammaC\"] or [\"gammaC\", \"delta\"]");
            }
        }
        const std::string obj = get_string(o, "objective", "optimize.", "E");
        if (obj == "E") {
            c.optimize.objective = Objective::E;
        } else if (obj == "ergotropy") {
            c.optimize.objective = Objective::Ergotropy;
        } else {
            fail("optimize.objective", "expected \"E\" or \"ergotropy\"");
        }
    }

    if (j.contains("dynamics")) {
        const json& d = j.at("dynamics");
        reject_unknown(d, "dynamics", {"dt", "t_max", "record_every"});
        if (d.contains("dt")) {
            c.dynamics.dt = get_number(d, "dt", "dynamics.", 0.0);
            if (!(*c.dynamics.dt > 0.0)) fail("dynamics.dt", "must be > 0");
        }
        c.dynamics.t_max = get_number(d, "t_max", "dynamics.", c.dynamics.t_max);
        if (!(c.dynamics.t_max > 0.0)) fail("dynamics.t_max", "must be > 0");
        c.dynamics.record_every = get_uint(d, "record_every", "dynamics.", c.dynamics.record_every);
        if (c.dynamics.record_every < 1) fail("dynamics.record_every", "must be >= 1");
    }

    if (j.contains("trajectories")) {
        const json& t = j.at("trajectories");
        reject_unknown(t, "trajectories", {"dt", "t_max", "ensemble_size", "record_every", "scheme"});
        const std::string w = "trajectories.";
        c.trajectories.dt = get_number(t, "dt", w, c.trajectories.dt);
        if (!(c.trajectories.dt > 0.0)) fail(w + "dt", "must be > 0");
        c.trajectories.t_max = get_number(t, "t_max", w, c.trajectories.t_max);
        if (!(c.trajectories.t_max > 0.0)) fail(w + "t_max", "must be > 0");
        c.trajectories.ensemble_size = get_uint(t, "ensemble_size", w, c.trajectories.ensemble_size);
        if (c.trajectories.ensemble_size < 2) fail(w + "ensemble_size", "must be >= 2");
        c.trajectories.record_every = get_uint(t, "record_every", w, c.trajectories.record_every);
        if (c.trajectories.record_every < 1) fail(w + "record_every", "must be >= 1");
        const std::string scheme = get_string(t, "scheme", w, "conditional_kraus");
        if (scheme == "conditional_kraus") {
            c.trajectories.scheme = TrajectoryScheme::ConditionalKraus;
        } else if (scheme == "measure_then_act") {
            c.trajectories.scheme = TrajectoryScheme::MeasureThenAct;
        } else {
            fail(w + "scheme", "expected conditional_kraus or measure_then_act");
        }
    }

    if (j.contains("reference")) {
        const json& r = j.at("reference");
        reject_unknown(r, "reference", {"F", "gammaC"});
        c.reference.F = get_number(r, "F", "reference.", c.reference.F);
        c.reference.gammaC = get_number(r, "gammaC", "reference.", c.reference.gammaC);
        if (!(c.reference.F > 0.0)) fail("reference.F", "must be > 0");
        if (!(c.reference.gammaC > 0.0)) fail("reference.gammaC", "must be > 0");
    }

    c.seed = get_uint(j, "seed", "", 0);

    if (j.contains("mutation")) {
        const json& m = j.at("mutation");
        reject_unknown(m, "mutation", {"flip_feedback_sign"});
        if (m.contains("flip_feedback_sign")) {
            if (!m.at("flip_feedback_sign").is_boolean()) {
                fail("mutation.flip_feedback_sign", "expected a boolean");
            }
            c.flip_feedback_sign = m.at("flip_feedback_sign").get<bool>();
        }
    }
    return c;
}

SweepConfig load_config(const std::string& path, std::optional<Mode> cli_mode) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(j, cli_mode);
}

json to_json(const SweepConfig& c) {
    json j;
    j["mode"] = std::string(to_string(c.mode));
    json b;
    b["g"] = c.base.g;
    b["gammaC"] = c.base.gammaC;
    b["gammaB"] = c.base.gammaB;
    b["J"] = c.base.J;
    b["delta"] = c.base.delta;
    b["eta"] = c.base.eta;
    b["reservoir"] = std::string(to_string(c.base.reservoir));
    if (c.base.n) {
        b["n"] = *c.base.n;
    } else {
        b["T"] = c.base.T;
    }
    b["N"] = c.base.N;
    j["base"] = b;
    static constexpr std::array<std::string_view, 4> kBasis{"auto", "two_qubit", "dicke", "full"};
    j["basis"] = std::string(kBasis[static_cast<std::size_t>(c.basis)]);
    json axes = json::array();
    for (const Axis& a : c.axes) {
        axes.push_back({{"name", a.name},
                        {"min", a.min},
                        {"max", a.max},
                        {"points", a.points},
                        {"scale", a.log_scale ? "log" : "linear"}});
    }
    j["axes"] = axes;
    json outs = json::array();
    for (Output o : c.outputs) outs.push_back(std::string(to_string(o)));
    j["outputs"] = outs;
    if (c.figure_id) j["figure_id"] = *c.figure_id;
    j["optimize"] = {{"free", c.optimize.free_delta ? json::array({"gammaC", "delta"})
                                                    : json::array({"gammaC"})},
                     {"objective", std::string(to_string(c.optimize.objective))}};
    json dyn = {{"t_max", c.dynamics.t_max}, {"record_every", c.dynamics.record_every}};
    if (c.dynamics.dt) dyn["dt"] = *c.dynamics.dt;
    j["dynamics"] = dyn;
    j["trajectories"] = {{"dt", c.trajectories.dt},
                         {"t_max", c.trajectories.t_max},
                         {"ensemble_size", c.trajectories.ensemble_size},
                         {"record_every", c.trajectories.record_every},
                         {"scheme", std::string(to_string(c.trajectories.scheme))}};
    j["reference"] = {{"F", c.reference.F}, {"gammaC", c.reference.gammaC}};
    j["seed"] = c.seed;
    if (c.flip_feedback_sign) j["mutation"] = {{"flip_feedback_sign", true}};
    return j;
}

std::uint64_t config_hash(const SweepConfig& cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qbatt::sweep
