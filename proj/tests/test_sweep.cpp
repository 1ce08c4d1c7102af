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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qbatt/sweep/config.hpp"
#include "qbatt/sweep/csv.hpp"
#include "qbatt/sweep/figures.hpp"
#include "qbatt/sweep/optimize.hpp"
#include "qbatt/sweep/run.hpp"

using namespace qbatt;
using namespace qbatt::sweep;
using nlohmann::json;

namespace {

std::string render(const CsvTable& t) {
    std::ostringstream s;
    t.write(s);
    return s.str();
}

// Column `name` of the data rows as doubles.
std::vector<double> column(const CsvTable& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    const auto k = static_cast<std::size_t>(it - t.columns.begin());
    std::vector<double> v;
    for (const auto& row : t.rows) v.push_back(std::stod(row[k]));
    return v;
}

std::string config_error(const json& j, std::optional<Mode> mode = Mode::Steady) {
    try {
        parse_config(j, mode);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "qbatt_test_sweep";
    std::filesystem::create_directories(dir);
    return dir / name;
}

int run_cli_process(const std::string& args) {
    const std::string cmd = std::string(QBATT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("float formatting: shortest round trip, at most 12 digits") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(50.0) == "50");
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(400.0 / 441.0) == "0.907029478458");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(2.5e12) == "2.5e+12");
    CHECK(format_double(123456.0) == "123456");
}

TEST_CASE("CSV escaping") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("config errors name the offending field") {
    CHECK(config_error({{"colour", 1}}).find("colour") != std::string::npos);
    CHECK(config_error({{"base", {{"gammaX", 1}}}}).find("base.gammaX") != std::string::npos);
    CHECK(config_error({{"base", {{"reservoir", "photonic"}}}}).find("base.reservoir") != std::string::npos);
    CHECK(config_error({{"axes", {{{"name", "delta"}, {"min", 1}, {"max", 0}, {"points", 5}}}}})
              .find("axes[0]") != std::string::npos);
    CHECK(config_error({{"axes", {{{"name", "delta"}, {"min", 0}, {"max", 1}, {"points", 1}}}}})
              .find("axes[0].points") != std::string::npos);
    CHECK(config_error({{"axes", {{{"name", "omega"}, {"min", 0}, {"max", 1}, {"points", 3}}}}})
              .find("axes[0].name") != std::string::npos);
    CHECK(config_error({{"outputs", {"E", "power"}}}).find("outputs[1]") != std::string::npos);
    CHECK(config_error({{"base", {{"reservoir", "fermionic"}, {"n", 0.7}}}}).find("base") != std::string::npos);
    CHECK(config_error(json::object(), Mode::Sweep2d).find("axes") != std::string::npos);
    CHECK(config_error(json::object(), Mode::Figure).find("figure_id") != std::string::npos);
    CHECK(config_error({{"mode", "optimize"}}, Mode::Steady).find("mode") != std::string::npos);
    CHECK(config_error({{"base", {{"T", 1}, {"n", 0.2}}}}).find("base.n") != std::string::npos);
}

TEST_CASE("canonical config round-trips through the metadata line") {
    const json in = {{"base", {{"gammaB", 0.5}, {"reservoir", "fermionic"}, {"T", 10}, {"N", 3}}},
                     {"axes", {{{"name", "gammaC"}, {"min", 0.2}, {"max", 50}, {"points", 7}, {"scale", "log"}}}},
                     {"outputs", {"density", "R"}},
                     {"seed", 99}};
    const SweepConfig a = parse_config(in, Mode::Sweep2d);
    const json canon = to_json(a);
    const SweepConfig b = parse_config(json::parse(canon.dump()));
    CHECK(to_json(b) == canon);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(b.axes[0].log_scale);
    CHECK(b.base.N == 3);

    SweepConfig c = a;
    c.seed = 100;
    CHECK(config_hash(c) != config_hash(a));
    c = a;
    c.threads = 8;  // threads do not change the output, so not the hash either
    CHECK(config_hash(c) == config_hash(a));
}

TEST_CASE("axis grids hit their endpoints exactly") {
    const Axis lin{"delta", 0.0, 2.0, 41, false};
    const auto v = lin.values();
    CHECK(v.size() == 41);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 2.0);
    CHECK(v[20] == 1.0);
    const Axis lg{"gammaC", 0.2, 50.0, 61, true};
    const auto w = lg.values();
    CHECK(w.back() == 50.0);
    CHECK(w[1] / w[0] == doctest::Approx(w[60] / w[59]));
}

TEST_CASE("steady mode at the optimal bosonic point") {
    const SweepConfig cfg = parse_config(json::object(), Mode::Steady);
    const RunResult r = execute(cfg);
    CHECK(r.exit_code == 0);
    REQUIRE(r.table.rows.size() == 1);
    CHECK(column(r.table, "E")[0] == doctest::Approx(400.0 / 441.0).epsilon(1e-11));
    CHECK(r.table.rows[0].back() == "ok");
}

TEST_CASE("sweep2d row count and order") {
    const json j = {{"axes",
                     {{{"name", "gammaC"}, {"min", 0.5}, {"max", 6}, {"points", 41}},
                      {{"name", "delta"}, {"min", 0}, {"max", 2}, {"points", 41}}}}};
    const RunResult r = execute(parse_config(j, Mode::Sweep2d));
    CHECK(r.table.rows.size() == 1681);
    // First axis outermost.
    CHECK(r.table.rows[0][0] == "0.5");
    CHECK(r.table.rows[1][0] == "0.5");
    CHECK(r.table.rows[1][1] == "0.05");
    CHECK(r.table.rows[41][0] != "0.5");
}

TEST_CASE("output is byte-identical across repeats and thread counts") {
    const json j = {{"base", {{"reservoir", "fermionic"}, {"T", 2}}},
                    {"axes", {{{"name", "gammaB"}, {"min", 0.01}, {"max", 3}, {"points", 23}, {"scale", "log"}}}}};
    SweepConfig cfg = parse_config(j, Mode::Steady);
    const std::string a = render(execute(cfg).table);
    const std::string b = render(execute(cfg).table);
    cfg.threads = 4;
    const std::string c = render(execute(cfg).table);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.find("# config_hash: fnv1a64:") != std::string::npos);
}

TEST_CASE("failed grid points keep their rows") {
    const json j = {{"basis", "two_qubit"},
                    {"base", {{"N", 1}}},
                    {"axes", {{{"name", "N"}, {"min", 1}, {"max", 3}, {"points", 3}}}}};
    const std::string err = config_error(j);
    CHECK(err.find("axes[0].name") != std::string::npos);

    // A two-qubit basis with N = 2 is a solver-level failure.
    const json k = {{"basis", "two_qubit"}, {"base", {{"N", 2}}}};
    const RunResult r = execute(parse_config(k, Mode::Steady));
    CHECK(r.exit_code == kExitSolver);
    REQUIRE(r.table.rows.size() == 1);
    CHECK(r.table.rows[0].back() != "ok");
    CHECK(r.table.rows[0][0].empty());
}

TEST_CASE("reference mode: ergotropy decreases with temperature") {
    const json j = {{"axes", {{{"name", "T"}, {"min", 0.05}, {"max", 50}, {"points", 30}}}}};
    const RunResult r = execute(parse_config(j, Mode::Reference));
    const auto erg = column(r.table, "ergotropy");
    for (std::size_t i = 1; i < erg.size(); ++i) CHECK(erg[i] < erg[i - 1]);
    CHECK(erg.back() < 1e-5);
}

TEST_CASE("optimize recovers the optimal point") {
    SystemParams p;
    p.g = 0.01;
    p.gammaB = 0.001;
    const OptimizeResult o = optimize(p, true, Objective::E);
    const double step = std::log(kGammaCMax / kGammaCMin) / (kGammaCPoints - 1) / 10.0;
    CHECK(std::abs(std::log(o.gammaC / 0.02)) <= step);
    CHECK(std::abs(o.delta - 1.0) <= kDeltaFineStep);
    CHECK(o.value == doctest::Approx(400.0 / 441.0).epsilon(1e-6));
    CHECK(o.evaluations == 61u * 41u + 21u * 21u);
}

TEST_CASE("single-particle multiparticle path gives the same optimum") {
    SystemParams p;
    p.g = 0.01;
    p.gammaB = 0.0005;
    p.n = 0.3;
    const OptimizeResult a = optimize(p, false, Objective::E, BasisSpec::two_qubit());
    const OptimizeResult b = optimize(p, false, Objective::E, BasisSpec::dicke(1));
    // Both bases give the same objective up to roundoff, which may move the
    // argmax by at most one refined step on a near-tie.
    const double step = std::log(kGammaCMax / kGammaCMin) / (kGammaCPoints - 1) / 10.0;
    CHECK(std::abs(std::log(a.gammaC / b.gammaC)) <= step * 1.0001);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("fermionic multiparticle optimal gammaC grows with N") {
    std::vector<double> gc;
    for (int n = 1; n <= 6; ++n) {
        SystemParams p;
        p.g = 0.01;
        p.gammaB = 0.0005;
        p.reservoir = ReservoirKind::Fermionic;
        p.N = n;
        gc.push_back(optimize(p, false, Objective::E).gammaC);
    }
    for (std::size_t i = 1; i < gc.size(); ++i) CHECK(gc[i] >= gc[i - 1]);
    CHECK(gc.back() > gc.front());
}

TEST_CASE("flat objective is reported") {
    // Past the critical dissipation rate the ergotropy is zero for every delta.
    SystemParams p;
    p.g = 0.01;
    p.gammaC = 0.02;
    p.gammaB = 0.02;
    try {
        optimize_delta(p, Objective::Ergotropy, default_basis(p));
        FAIL("expected FlatObjective");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FlatObjective);
    }
}

TEST_CASE("figure recipes") {
    CHECK(figure_ids().size() == 27);
    try {
        build_figure("fig99");
        FAIL("expected UnknownFigure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownFigure);
    }

    auto values = [](const FigureData& f, const std::string& q, const std::string& series) {
        std::vector<std::pair<double, double>> v;
        for (const FigureRow& r : f.rows) {
            if (r.quantity == q && r.series == series && r.value) v.emplace_back(r.x1, *r.value);
        }
        return v;
    };
    const auto r8 = values(build_figure("fig8"), "R", "feedback");
    REQUIRE(r8.size() == 100);
    for (std::size_t i = 1; i < r8.size(); ++i) CHECK(r8[i].second < r8[i - 1].second);
    const auto r13 = values(build_figure("fig13"), "R", "feedback");
    for (std::size_t i = 1; i < r13.size(); ++i) CHECK(r13[i].second > r13[i - 1].second);

    // At gammaB = 0 every temperature curve starts from a fully charged battery.
    const FigureData f11 = build_figure("fig11");
    for (const char* T : {"T=0", "T=0.5", "T=1", "T=10"}) {
        const auto e = values(f11, "E", T);
        REQUIRE(!e.empty());
        CHECK(e.front().first == 0.0);
        CHECK(e.front().second == doctest::Approx(1.0).epsilon(1e-9));
        // At gammaB = 0.05g the curve follows the closed form.
        for (const auto& [gb, val] : e) {
            if (std::abs(gb - 0.05) < 1e-12) {
                const auto closed = values(f11, "E_closed", T);
                for (const auto& [x, c] : closed)
                    if (x == gb) CHECK(val == doctest::Approx(c).epsilon(1e-9));
            }
        }
    }

    const FigureData f2 = build_figure("fig2");
    CHECK(f2.rows.size() == 2 * (41 * 41 + 1));
    for (const FigureRow& r : f2.rows) {
        if (r.series != "optimum") continue;
        CHECK(std::abs(r.x1 / 2.0 - 1.0) < 0.01);
        CHECK(*r.x2 == doctest::Approx(1.0));
    }
}

TEST_CASE("command-line exit codes") {
    const auto good = scratch("good.json");
    const auto bad = scratch("bad.json");
    const auto solver = scratch("solver.json");
    const auto out1 = scratch("out1.csv");
    const auto out2 = scratch("out2.csv");
    std::ofstream(good) << R"({"axes":[{"name":"delta","min":0,"max":2,"points":9}]})";
    std::ofstream(bad) << R"({"base":{"gamma":1}})";
    std::ofstream(solver) << R"({"basis":"two_qubit","base":{"N":2}})";
    CHECK(run_cli_process("sweep2d --config " + good.string() + " --out " + out1.string()) == 0);
    CHECK(run_cli_process("sweep2d --config " + good.string() + " --out " + out2.string() + " --threads 3") == 0);
    std::ifstream a(out1), b(out2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(run_cli_process("steady --config " + bad.string()) == 1);
    CHECK(run_cli_process("steady --config " + scratch("missing.json").string()) == 1);
    CHECK(run_cli_process("steady --config " + solver.string()) == 2);
    CHECK(run_cli_process("steady") == 1);
    CHECK(run_cli_process("nonsense --config " + good.string()) == 1);
}

TEST_CASE("seed override reaches the metadata") {
    const auto cfgp = scratch("traj.json");
    const auto o1 = scratch("t1.csv");
    const auto o2 = scratch("t2.csv");
    std::ofstream(cfgp) << R"({"trajectories":{"t_max":2,"ensemble_size":8,"record_every":1000}})";
    CHECK(run_cli_process("trajectories --config " + cfgp.string() + " --out " + o1.string() + " --seed 7") == 0);
    CHECK(run_cli_process("trajectories --config " + cfgp.string() + " --out " + o2.string() + " --seed 7") == 0);
    std::ifstream a(o1), b(o2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("# seed: 7") != std::string::npos);
}
