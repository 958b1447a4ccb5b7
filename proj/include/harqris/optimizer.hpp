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

#include "harqris/analytic.hpp"
#include "harqris/channel.hpp"

namespace harqris::optimizer {

struct PhaseSolution {
    channel::PhaseConfig phases;
    double psi_glos_achieved = 0.0;
    double upper_bound = 0.0;  ///< (a + sum c)^2
    double gap = 0.0;          ///< upper_bound - psi_glos_achieved
};

/// Phase shifts maximizing the LoS power of the equivalent channel, and with
/// it minimizing both exact and asymptotic outage.
///
/// Each reflected phasor is rotated onto the direct LoS phase:
/// theta_kn = phi_sd - phi_sr_kn - phi_rd_kn (mod 2 pi). The sum of aligned
/// phasors reaches the triangle-inequality bound (a + sum c)^2, so the
/// solution is global. With no direct LoS component the common target
/// phase is 0. Throws ConfigError for a network without reflecting elements.
PhaseSolution optimal_phases(const channel::NetworkConfig& net);

struct StrategyCurve {
    channel::PhaseConfig phases;
    channel::ChannelStats stats;
    analytic::OutageCurve curve;
};

struct StrategyComparison {
    StrategyCurve optimal;
    StrategyCurve fixed;   ///< every element at fixed_theta
    StrategyCurve random;  ///< uniform draws keyed by random_seed
};

inline constexpr double kFixedStrategyPhase = std::numbers::pi / 3.0;

/// Exact outage over harq.snr_grid for the optimal, fixed and random phase settings.
StrategyComparison compare_strategies(const channel::NetworkConfig& net, const analytic::HarqParams& harq,
                                      const specfun::TruncationPolicy& policy, std::uint64_t random_seed,
                                      double fixed_theta = kFixedStrategyPhase, unsigned workers = 1);

}  // namespace harqris::optimizer
