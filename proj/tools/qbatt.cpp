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

// qbatt command-line front end.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbatt/sweep/figures.hpp"
#include "qbatt/sweep/run.hpp"

int main(int argc, char** argv) {
    using namespace qbatt::sweep;
    CLI::App app{"qbatt: steady states, dynamics and trajectories of a feedback-charged quantum battery"};
    app.set_version_flag("--version", kVersion);

    std::string mode_name;
    CliOptions opts;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    app.add_option("mode", mode_name,
                   "steady | dynamics | trajectories | sweep2d | optimize | figure | audit | reference")
        ->required();
    auto* config_opt = app.add_option("--config,-c", config, "JSON configuration file");
    auto* out_opt = app.add_option("--out,-o", out, "CSV output path (stdout when omitted)");
    auto* seed_opt = app.add_option("--seed", seed, "Overrides the config seed");
    app.add_option("--threads", opts.threads, "Worker threads (0 = all cores)")->default_val(1);
    app.add_flag("--mutate-flip-feedback-sign", opts.flip_feedback_sign)->group("");
    app.footer("Figure ids: fig2 ... fig21, figB22, fig23 ... fig28.\n"
               "Exit codes: 0 ok, 1 configuration error, 2 solver error; audit returns the "
               "number of failed checks.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        opts.mode = parse_mode(mode_name);
    } catch (const qbatt::Error& e) {
        std::cerr << "qbatt: " << e.what() << '\n';
        return kExitConfig;
    }
    if (*config_opt) opts.config_path = config;
    if (*out_opt) opts.out = out;
    if (*seed_opt) opts.seed = seed;
    return run_cli(opts, std::cout, std::cerr);
}
