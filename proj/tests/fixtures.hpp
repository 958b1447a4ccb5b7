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
#include <numbers>
#include <random>
#include <vector>

#include "harqris/channel.hpp"

namespace fixtures {

using harqris::channel::NetworkConfig;
using harqris::channel::PathLossSpec;
using harqris::channel::PhaseConfig;
using harqris::channel::RisPanel;

/// The reference deployment: K = 3 surfaces of N = 4 elements, d_sd = 70 m,
/// d_sr = 50 m, d_rd = 40 m (d0 = 20 m), exponents 2.5 / 2 / 2.2,
/// kappa_sd = -5 dB, kappa_rd = 0.4 dB, LoS phases drawn from \p seed.
inline NetworkConfig reference_network(std::uint64_t los_seed = 2021, std::size_t elements = 4) {
    using namespace harqris::channel;
    NetworkConfig net;
    net.direct.beta_sd = path_gain({70.0, 20.0, 2.5});
    net.direct.kappa_sd = db_to_linear(-5.0);
    for (int k = 0; k < 3; ++k) {
        RisPanel p;
        p.n_elements = elements;
        p.beta_sr = path_gain({50.0, 20.0, 2.0});
        p.beta_rd = path_gain({40.0, 20.0, 2.2});
        p.kappa_rd = db_to_linear(0.4);
        net.panels.push_back(p);
    }
    fill_los_phases(net, los_seed);
    return net;
}

/// theta_k = (0, pi/6, pi/4, pi/3) on every surface.
inline PhaseConfig reference_phases(const NetworkConfig& net) {
    constexpr double pi = std::numbers::pi;
    return PhaseConfig::tiled(net, {0.0, pi / 6.0, pi / 4.0, pi / 3.0});
}

/// A random network with 1..3 panels of 1..6 elements and random gains,
/// Rician factors and LoS phases; for property tests.
inline NetworkConfig random_network(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> gain(0.01, 1.0);
    std::uniform_real_distribution<double> kappa(0.0, 5.0);
    std::uniform_int_distribution<int> panels(1, 3);
    std::uniform_int_distribution<int> elements(1, 6);
    NetworkConfig net;
    net.direct.beta_sd = gain(gen);
    net.direct.kappa_sd = kappa(gen);
    const int k = panels(gen);
    for (int i = 0; i < k; ++i) {
        RisPanel p;
        p.n_elements = static_cast<std::size_t>(elements(gen));
        p.beta_sr = gain(gen);
        p.beta_rd = gain(gen);
        p.kappa_rd = kappa(gen);
        net.panels.push_back(p);
    }
    harqris::channel::fill_los_phases(net, gen());
    return net;
}

}  // namespace fixtures
