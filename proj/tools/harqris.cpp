// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The harqris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line experiment runner.
//
//   harqris <subcommand> --scenario <path> --out <dir> [--trials N] [--seed S]
//           [--trunc fixed:50|adaptive:1e-12] [--workers W]
//
// Exit codes: 0 success, 2 validation error, 3 numeric failure, 1 anything else.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "harqris/error.hpp"
#include "harqris/runner.hpp"
#include "harqris/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Args {
    std::string scenario;
    std::string out = ".";
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> trunc;
    unsigned workers = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis of HARQ-aided multi-RIS links"};
    app.set_version_flag("--version", std::string(harqris::runner::kToolVersion));
    app.require_subcommand(1);

    Args args;
    for (const auto& name : harqris::runner::subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", args.scenario, "scenario file (TOML or JSON, or a run manifest)")->required();
        sub->add_option("--out", args.out, "output directory");
        sub->add_option("--trials", args.trials, "Monte-Carlo trials per SNR point");
        sub->add_option("--seed", args.seed, "Monte-Carlo seed");
        sub->add_option("--trunc", args.trunc, "series truncation: fixed:<order> or adaptive:<tolerance>");
        sub->add_option("--workers", args.workers, "worker threads (0 = all cores)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        harqris::runner::RunOptions options;
        options.out_dir = args.out;
        options.workers = args.workers;
        options.trials = args.trials;
        options.seed = args.seed;
        options.scenario_source = args.scenario;
        if (args.trunc) options.truncation = harqris::runner::parse_truncation(*args.trunc);

        auto sc = harqris::runner::apply_overrides(harqris::scenario::load_scenario(args.scenario), options);
        const auto out = harqris::runner::run(subcommand, sc, options);
        std::cout << out.csv.string() << '\n' << out.manifest.string() << '\n';
        return 0;
    } catch (const harqris::ConfigError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const harqris::DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const harqris::TruncationError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const harqris::FitError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const harqris::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
