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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harqris/scenario.hpp"
#include "harqris/specfun.hpp"

namespace harqris::runner {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunOptions {
    std::filesystem::path out_dir = ".";
    unsigned workers = 0;  ///< 0: hardware concurrency
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<specfun::TruncationPolicy> truncation;
    std::string scenario_source;  ///< recorded in the manifest only
};

struct RunOutputs {
    std::filesystem::path csv;
    std::filesystem::path manifest;
};

/// op-curve, asymptote, mc, optimize-phase, diversity.
const std::vector<std::string>& subcommands();

/// "fixed:50" or "adaptive:1e-12"; a bare mode takes its default. Throws
/// ConfigError otherwise.
specfun::TruncationPolicy parse_truncation(std::string_view text);

/// Folds command-line overrides into the scenario so the manifest records
/// exactly what ran. Throws ConfigError (e.g. trials = 0).
scenario::Scenario apply_overrides(scenario::Scenario sc, const RunOptions& options);

/// Runs one subcommand and writes <out_dir>/<subcommand>.csv and
/// <out_dir>/<subcommand>.manifest.json. The CSV depends only on the
/// scenario (after overrides), never on the worker count.
RunOutputs run(std::string_view subcommand, const scenario::Scenario& sc, const RunOptions& options);

/// Scientific notation with 12 significant digits.
std::string format_probability(double p);

}  // namespace harqris::runner
