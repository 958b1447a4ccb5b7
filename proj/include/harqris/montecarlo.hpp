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

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "harqris/analytic.hpp"
#include "harqris/channel.hpp"
#include "harqris/rng.hpp"

namespace harqris::montecarlo {

using analytic::Scheme;

struct SimulationPlan {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    unsigned max_rounds = 1;
    Scheme scheme = Scheme::TypeI;
    double rate = 1.0;
    double rho = 1.0;
    std::uint64_t chunk_size = 1u << 16;
    unsigned workers = 0;  ///< 0: hardware concurrency; never changes the result

    void validate() const;
};

struct OutageEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;  ///< sqrt(p_hat (1 - p_hat) / trials)
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t outages = 0;
};

/// Draws the equivalent channel h_l of one HARQ round.
///
/// LoS phasors and phase shifts are fixed; every NLoS coefficient is a fresh
/// CN(0, 1) draw addressed by (trial, round, element), element 0 being the
/// direct link and 1.. the reflecting elements in panel order.
class ChannelSampler {
public:
    ChannelSampler(const channel::NetworkConfig& net, const channel::PhaseConfig& phases);

    std::complex<double> sample(const rng::CounterStream& stream, std::uint64_t trial, std::uint32_t round) const;

    /// E[h_l]; equals compute_stats(net, phases).mu.
    std::complex<double> mean() const noexcept { return mean_; }

private:
    std::complex<double> mean_;
    std::complex<double> direct_scatter_;
    // Scale applied to each reflecting element's NLoS draw.
    std::vector<std::complex<double>> element_scatter_;
};

/// One draw of h_l; convenience wrapper over ChannelSampler.
std::complex<double> sample_equivalent_channel(const channel::NetworkConfig& net, const channel::PhaseConfig& phases,
                                               const rng::CounterStream& stream, std::uint64_t trial,
                                               std::uint32_t round);

/// Type-I: max_l log2(1 + g_l); CC: log2(1 + sum_l g_l), where g_l = rho |h_l|^2.
double accumulated_information(std::span<const double> snr_gains, Scheme scheme);

/// Fraction of trials whose accumulated information after L rounds stays below R.
OutageEstimate estimate_outage(const channel::NetworkConfig& net, const channel::PhaseConfig& phases,
                               const SimulationPlan& plan);

/// Outage counts for both schemes and every L in 1..max_rounds from one
/// shared set of draws. counts[scheme][L - 1].
struct JointOutageCounts {
    std::uint64_t trials = 0;
    std::array<std::vector<std::uint64_t>, 2> counts;

    OutageEstimate estimate(Scheme scheme, unsigned rounds, std::uint64_t seed) const;
};

JointOutageCounts estimate_outage_joint(const channel::NetworkConfig& net, const channel::PhaseConfig& phases,
                                        const SimulationPlan& plan);

}  // namespace harqris::montecarlo
