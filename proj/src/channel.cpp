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

#include "harqris/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "harqris/error.hpp"
#include "harqris/rng.hpp"
#include "harqris/specfun.hpp"

namespace harqris::channel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Link ids for keyed LoS phase draws.
constexpr std::uint64_t kDirectLink = 0;
constexpr std::uint64_t kSourceRisLink = 1;
constexpr std::uint64_t kRisDestinationLink = 2;
// Random phase-shift draws live in their own stream range, one per panel.
constexpr std::uint64_t kPhaseShiftStreams = std::uint64_t{3} << 32;

bool valid_phase(double p) { return std::isfinite(p) && p >= 0.0 && p < kTwoPi; }

void require_gain(double beta, const std::string& field) {
    if (!std::isfinite(beta) || !(beta > 0.0)) throw ConfigError(field + " must be positive and finite");
}

void require_kappa(double kappa, const std::string& field) {
    if (std::isnan(kappa) || kappa < 0.0) throw ConfigError(field + " must be nonnegative");
}

void require_phases(const std::vector<double>& phases, std::size_t n, const std::string& field) {
    if (phases.size() != n) {
        throw ConfigError(field + " has " + std::to_string(phases.size()) + " entries, expected " + std::to_string(n));
    }
    for (double p : phases) {
        if (!valid_phase(p)) throw ConfigError(field + " entries must lie in [0, 2pi)");
    }
}

}  // namespace

void NetworkConfig::validate() const {
    require_gain(direct.beta_sd, "direct.beta");
    require_kappa(direct.kappa_sd, "direct.kappa");
    if (!valid_phase(direct.los_phase_sd)) throw ConfigError("direct.los_phase must lie in [0, 2pi)");
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const auto& p = panels[k];
        const std::string name = "panels[" + std::to_string(k) + "]";
        if (p.n_elements < 1) throw ConfigError(name + ".elements must be at least 1");
        require_gain(p.beta_sr, name + ".beta_sr");
        require_gain(p.beta_rd, name + ".beta_rd");
        require_kappa(p.kappa_rd, name + ".kappa");
        require_phases(p.los_phases_sr, p.n_elements, name + ".los_phases_sr");
        require_phases(p.los_phases_rd, p.n_elements, name + ".los_phases_rd");
    }
}

std::size_t NetworkConfig::total_elements() const noexcept {
    std::size_t n = 0;
    for (const auto& p : panels) n += p.n_elements;
    return n;
}

PhaseConfig PhaseConfig::constant(const NetworkConfig& net, double theta) {
    PhaseConfig out;
    for (const auto& p : net.panels) out.thetas.emplace_back(p.n_elements, wrap_phase(theta));
    return out;
}

PhaseConfig PhaseConfig::tiled(const NetworkConfig& net, const std::vector<double>& per_panel) {
    if (per_panel.empty()) throw ConfigError("per-panel phase vector is empty");
    PhaseConfig out;
    for (const auto& p : net.panels) {
        auto& row = out.thetas.emplace_back(p.n_elements);
        for (std::size_t n = 0; n < p.n_elements; ++n) row[n] = wrap_phase(per_panel[n % per_panel.size()]);
    }
    return out;
}

PhaseConfig PhaseConfig::random(const NetworkConfig& net, std::uint64_t seed) {
    const rng::CounterStream stream(seed);
    PhaseConfig out;
    for (std::size_t k = 0; k < net.panels.size(); ++k) {
        auto& row = out.thetas.emplace_back(net.panels[k].n_elements);
        for (std::size_t n = 0; n < row.size(); ++n) {
            row[n] = stream.angle({kPhaseShiftStreams + k, static_cast<std::uint32_t>(n), 0});
        }
    }
    return out;
}

void PhaseConfig::validate(const NetworkConfig& net) const {
    if (thetas.size() != net.panels.size()) {
        throw ConfigError("phase configuration has " + std::to_string(thetas.size()) + " panels, network has " +
                          std::to_string(net.panels.size()));
    }
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        require_phases(thetas[k], net.panels[k].n_elements, "phases[" + std::to_string(k) + "]");
    }
}

double ChannelStats::xi(unsigned rounds) const {
    if (!(psi_gnlos > 0.0)) throw DomainError("non-centrality undefined without a diffuse component");
    return rounds * psi_glos / psi_gnlos;
}

ChannelStats ChannelStats::from_powers(double psi_glos, double psi_gnlos) {
    if (!std::isfinite(psi_glos) || psi_glos < 0.0) throw DomainError("LoS power must be nonnegative and finite");
    if (!std::isfinite(psi_gnlos) || psi_gnlos < 0.0) throw DomainError("NLoS power must be nonnegative and finite");
    return {std::complex<double>(std::sqrt(psi_glos), 0.0), psi_glos, psi_gnlos};
}

double path_gain(const PathLossSpec& spec) {
    if (!(spec.distance > 0.0) || !(spec.reference_distance > 0.0) || !(spec.exponent > 0.0) ||
        !std::isfinite(spec.distance) || !std::isfinite(spec.reference_distance) || !std::isfinite(spec.exponent)) {
        throw DomainError("path loss distances and exponent must be positive and finite");
    }
    return std::pow(spec.distance / spec.reference_distance, -spec.exponent);
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

double wrap_phase(double radians) noexcept {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r < kTwoPi ? r : 0.0;
}

double los_share(double kappa) noexcept { return std::isinf(kappa) ? 1.0 : kappa / (kappa + 1.0); }

double nlos_share(double kappa) noexcept { return std::isinf(kappa) ? 0.0 : 1.0 / (kappa + 1.0); }

double direct_los_amplitude(const DirectLink& link) noexcept {
    return std::sqrt(link.beta_sd * los_share(link.kappa_sd));
}

double reflected_los_amplitude(const RisPanel& panel) noexcept {
    return std::sqrt(panel.beta_rd * panel.beta_sr * los_share(panel.kappa_rd));
}

double diffuse_power(const NetworkConfig& net) noexcept {
    specfun::CompensatedSum sum;
    sum.add(net.direct.beta_sd * nlos_share(net.direct.kappa_sd));
    for (const auto& p : net.panels) {
        sum.add(static_cast<double>(p.n_elements) * p.beta_rd * p.beta_sr * nlos_share(p.kappa_rd));
    }
    return sum.value();
}

ChannelStats compute_stats(const NetworkConfig& net, const PhaseConfig& phases) {
    net.validate();
    phases.validate(net);

    specfun::CompensatedSum re;
    specfun::CompensatedSum im;
    const auto direct = std::polar(direct_los_amplitude(net.direct), net.direct.los_phase_sd);
    re.add(direct.real());
    im.add(direct.imag());
    for (std::size_t k = 0; k < net.panels.size(); ++k) {
        const auto& p = net.panels[k];
        const double amp = reflected_los_amplitude(p);
        for (std::size_t n = 0; n < p.n_elements; ++n) {
            const auto z = std::polar(amp, p.los_phases_rd[n] + phases.thetas[k][n] + p.los_phases_sr[n]);
            re.add(z.real());
            im.add(z.imag());
        }
    }
    ChannelStats stats;
    stats.mu = {re.value(), im.value()};
    stats.psi_glos = std::norm(stats.mu);
    stats.psi_gnlos = diffuse_power(net);
    return stats;
}

double los_power_upper_bound(const NetworkConfig& net) noexcept {
    specfun::CompensatedSum sum;
    sum.add(direct_los_amplitude(net.direct));
    for (const auto& p : net.panels) sum.add(static_cast<double>(p.n_elements) * reflected_los_amplitude(p));
    const double s = sum.value();
    return s * s;
}

void fill_los_phases(NetworkConfig& net, std::uint64_t seed, bool include_direct) {
    const rng::CounterStream stream(seed);
    if (include_direct) net.direct.los_phase_sd = stream.angle({kDirectLink, 0, 0});
    for (std::size_t k = 0; k < net.panels.size(); ++k) {
        auto& p = net.panels[k];
        auto fill = [&](std::vector<double>& phases, std::uint64_t link) {
            if (!phases.empty()) return;
            phases.resize(p.n_elements);
            for (std::size_t n = 0; n < p.n_elements; ++n) {
                phases[n] = stream.angle({link, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(n)});
            }
        };
        fill(p.los_phases_sr, kSourceRisLink);
        fill(p.los_phases_rd, kRisDestinationLink);
    }
}

}  // namespace harqris::channel
