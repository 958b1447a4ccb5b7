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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace harqris::channel {

/// Source-destination link. The LoS component is unit-modulus, so only its
/// phase is stored.
struct DirectLink {
    double beta_sd = 1.0;      ///< linear path gain
    double kappa_sd = 0.0;     ///< linear Rician factor, may be +inf
    double los_phase_sd = 0.0; ///< radians in [0, 2 pi)
};

/// One reflecting surface. The source-RIS hop is pure LoS; the RIS-destination
/// hop is Rician. Reflection amplitude is fixed at one.
struct RisPanel {
    std::size_t n_elements = 1;
    double beta_sr = 1.0;
    double beta_rd = 1.0;
    double kappa_rd = 0.0;
    std::vector<double> los_phases_sr;
    std::vector<double> los_phases_rd;
};

struct NetworkConfig {
    DirectLink direct;
    std::vector<RisPanel> panels;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    std::size_t total_elements() const noexcept;
};

/// Log-distance path loss, gain = (distance / reference_distance)^(-exponent).
struct PathLossSpec {
    double distance = 1.0;
    double reference_distance = 1.0;
    double exponent = 2.0;
};

/// One phase shift per reflecting element, grouped by panel.
struct PhaseConfig {
    std::vector<std::vector<double>> thetas;

    /// Every element set to the same (wrapped) angle.
    static PhaseConfig constant(const NetworkConfig& net, double theta);
    /// Every panel uses the same per-element vector, repeated cyclically
    /// when a panel has more elements than the vector.
    static PhaseConfig tiled(const NetworkConfig& net, const std::vector<double>& per_panel);
    /// Independent uniform draws on [0, 2 pi) keyed by (seed, panel, element).
    static PhaseConfig random(const NetworkConfig& net, std::uint64_t seed);

    void validate(const NetworkConfig& net) const;
};

/// Mean and diffuse power of the equivalent per-round channel.
struct ChannelStats {
    std::complex<double> mu;  ///< deterministic LoS phasor sum
    double psi_glos = 0.0;    ///< |mu|^2
    double psi_gnlos = 0.0;   ///< variance of the NLoS part

    /// Non-centrality L * psi_glos / psi_gnlos of the L-round gain sum.
    double xi(unsigned rounds) const;

    /// Stats with a real, nonnegative mean; for analytic work where only
    /// the two powers matter.
    static ChannelStats from_powers(double psi_glos, double psi_gnlos);
};

double path_gain(const PathLossSpec& spec);
double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// Reduces an angle into [0, 2 pi).
double wrap_phase(double radians) noexcept;

/// kappa / (kappa + 1), with the kappa = inf limit handled.
double los_share(double kappa) noexcept;
/// 1 / (kappa + 1), with the kappa = inf limit handled.
double nlos_share(double kappa) noexcept;

/// Amplitude of the direct LoS phasor, sqrt(beta kappa / (kappa + 1)).
double direct_los_amplitude(const DirectLink& link) noexcept;
/// Amplitude of each reflected LoS phasor of a panel.
double reflected_los_amplitude(const RisPanel& panel) noexcept;

double diffuse_power(const NetworkConfig& net) noexcept;
ChannelStats compute_stats(const NetworkConfig& net, const PhaseConfig& phases);

/// (a + sum c)^2: the LoS power when every phasor is collinear.
double los_power_upper_bound(const NetworkConfig& net) noexcept;

/// Fills every empty LoS phase vector (and a zero direct phase when
/// \p include_direct) with uniform draws keyed by (seed, link, panel, element).
/// Draws are prefix-stable: growing a panel keeps the existing phases.
void fill_los_phases(NetworkConfig& net, std::uint64_t seed, bool include_direct = true);

}  // namespace harqris::channel
