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
#include <utility>
#include <vector>

#include <json.hpp>

#include "harqris/analytic.hpp"
#include "harqris/channel.hpp"
#include "harqris/specfun.hpp"

namespace harqris::scenario {

/// Network as written in a scenario: gains and Rician factors already
/// linear, LoS phases either explicit or drawn from los_phase_seed.
struct NetworkSpec {
    channel::NetworkConfig base;     ///< LoS phase vectors may be empty
    bool direct_phase_explicit = false;
    std::uint64_t los_phase_seed = 0;
};

struct PhaseStrategy {
    enum class Kind { Optimal, Fixed, Random, Explicit };

    Kind kind = Kind::Optimal;
    double fixed_value = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> per_panel;            ///< explicit: same vector on every panel
    std::vector<std::vector<double>> values;  ///< explicit: one vector per panel
};

struct MonteCarloSpec {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 1u << 16;
};

struct Scenario {
    std::string name;
    NetworkSpec network;
    std::vector<analytic::Scheme> schemes;
    std::vector<unsigned> rounds;
    double rate = 0.0;
    std::vector<double> snr_db;
    specfun::TruncationPolicy truncation = specfun::TruncationPolicy::fixed(50);
    PhaseStrategy phases;
    MonteCarloSpec montecarlo;
    std::vector<std::size_t> element_sweep;  ///< empty: the network as given
    std::optional<std::pair<double, double>> diversity_window_db;
    std::uint64_t compare_random_seed = 1;
    double compare_fixed_value = 0.0;
};

/// One concrete network of a scenario (a sweep yields several).
struct Variant {
    std::string label;
    channel::NetworkConfig network;
    channel::PhaseConfig phases;
};

/// Parses a TOML or JSON scenario (by extension; .json is JSON, anything
/// else TOML). A run manifest is accepted too and yields the scenario it
/// recorded. Unknown keys are rejected.
///
/// Throws ConfigError: parse errors carry line context, validation errors
/// name the offending field (e.g. "harq.rate").
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_toml(const std::string& text, const std::string& source = "<string>");
Scenario from_json(const nlohmann::json& doc);

/// Normalized form with every conversion already applied; from_json of the
/// result reproduces the scenario exactly.
nlohmann::json to_json(const Scenario& scenario);

std::vector<double> snr_linear(const Scenario& scenario);
channel::PhaseConfig resolve_phases(const PhaseStrategy& strategy, const channel::NetworkConfig& net);
std::vector<Variant> resolve_variants(const Scenario& scenario);

}  // namespace harqris::scenario
