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

#include "harqris/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "harqris/error.hpp"
#include "harqris/parallel.hpp"

namespace harqris::montecarlo {

namespace {

constexpr std::size_t kTypeI = 0;
constexpr std::size_t kCc = 1;

std::size_t scheme_slot(Scheme s) { return s == Scheme::TypeI ? kTypeI : kCc; }

// Runs trials [first, last) for every L up to max_rounds, accumulating
// outage counts for both schemes.
void run_trials(const ChannelSampler& sampler, const rng::CounterStream& stream, const SimulationPlan& plan,
                double threshold, std::uint64_t first, std::uint64_t last,
                std::array<std::vector<std::uint64_t>, 2>& counts) {
    for (std::uint64_t trial = first; trial < last; ++trial) {
        double best = 0.0;
        double total = 0.0;
        for (unsigned l = 0; l < plan.max_rounds; ++l) {
            const double gain = plan.rho * std::norm(sampler.sample(stream, trial, l));
            best = std::max(best, gain);
            total += gain;
            const bool cc_out = total < threshold;
            if (cc_out) ++counts[kCc][l];
            if (best < threshold) {
                ++counts[kTypeI][l];
            } else if (!cc_out) {
                break;  // decoded under both schemes; later rounds are never sent
            }
        }
    }
}

}  // namespace

void SimulationPlan::validate() const {
    if (trials < 1) throw ConfigError("montecarlo.trials must be at least 1");
    if (max_rounds < 1) throw ConfigError("harq.rounds must be at least 1");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("harq.rate must be positive");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("SNR must be positive");
    if (chunk_size < 1) throw ConfigError("montecarlo.chunk_size must be at least 1");
}

ChannelSampler::ChannelSampler(const channel::NetworkConfig& net, const channel::PhaseConfig& phases) {
    net.validate();
    phases.validate(net);
    const auto& d = net.direct;
    mean_ = std::polar(channel::direct_los_amplitude(d), d.los_phase_sd);
    direct_scatter_ = std::sqrt(d.beta_sd * channel::nlos_share(d.kappa_sd));
    for (std::size_t k = 0; k < net.panels.size(); ++k) {
        const auto& p = net.panels[k];
        const double los = channel::reflected_los_amplitude(p);
        const double scatter = std::sqrt(p.beta_rd * p.beta_sr * channel::nlos_share(p.kappa_rd));
        for (std::size_t n = 0; n < p.n_elements; ++n) {
            // h_rd * e^{j theta} * h_sr: the source-RIS hop and the phase shift
            // rotate both the LoS and the scattered part of h_rd.
            const double rotation = phases.thetas[k][n] + p.los_phases_sr[n];
            mean_ += std::polar(los, p.los_phases_rd[n] + rotation);
            element_scatter_.push_back(std::polar(scatter, rotation));
        }
    }
}

std::complex<double> ChannelSampler::sample(const rng::CounterStream& stream, std::uint64_t trial,
                                             std::uint32_t round) const {
    std::complex<double> h = mean_;
    if (direct_scatter_ != 0.0) h += direct_scatter_ * stream.complex_normal({trial, round, 0});
    for (std::size_t e = 0; e < element_scatter_.size(); ++e) {
        if (element_scatter_[e] == 0.0) continue;
        h += element_scatter_[e] * stream.complex_normal({trial, round, static_cast<std::uint32_t>(e + 1)});
    }
    return h;
}

std::complex<double> sample_equivalent_channel(const channel::NetworkConfig& net, const channel::PhaseConfig& phases,
                                               const rng::CounterStream& stream, std::uint64_t trial,
                                               std::uint32_t round) {
    return ChannelSampler(net, phases).sample(stream, trial, round);
}

double accumulated_information(std::span<const double> snr_gains, Scheme scheme) {
    if (snr_gains.empty()) throw DomainError("accumulated information needs at least one round");
    for (double g : snr_gains) {
        if (!(g >= 0.0)) throw DomainError("per-round SNR gains must be nonnegative");
    }
    if (scheme == Scheme::TypeI) {
        return std::log2(1.0 + *std::max_element(snr_gains.begin(), snr_gains.end()));
    }
    double total = 0.0;
    for (double g : snr_gains) total += g;
    return std::log2(1.0 + total);
}

OutageEstimate JointOutageCounts::estimate(Scheme scheme, unsigned rounds, std::uint64_t seed) const {
    const auto& c = counts[scheme_slot(scheme)];
    if (rounds < 1 || rounds > c.size()) throw DomainError("requested rounds exceed the simulated maximum");
    OutageEstimate out;
    out.trials = trials;
    out.seed = seed;
    out.outages = c[rounds - 1];
    out.p_hat = static_cast<double>(out.outages) / static_cast<double>(trials);
    out.std_error = std::sqrt(out.p_hat * (1.0 - out.p_hat) / static_cast<double>(trials));
    return out;
}

JointOutageCounts estimate_outage_joint(const channel::NetworkConfig& net, const channel::PhaseConfig& phases,
                                        const SimulationPlan& plan) {
    plan.validate();
    const ChannelSampler sampler(net, phases);
    const rng::CounterStream stream(plan.seed);
    // Outage iff rho * gain < 2^R - 1, i.e. log2(1 + rho * gain) < R.
    const double threshold = std::expm1(plan.rate * std::numbers::ln2);

    const std::uint64_t n_chunks = (plan.trials + plan.chunk_size - 1) / plan.chunk_size;
    std::vector<std::array<std::vector<std::uint64_t>, 2>> per_chunk(n_chunks);
    parallel_for(n_chunks, plan.workers, [&](std::size_t c) {
        auto& counts = per_chunk[c];
        counts[kTypeI].assign(plan.max_rounds, 0);
        counts[kCc].assign(plan.max_rounds, 0);
        const std::uint64_t first = c * plan.chunk_size;
        const std::uint64_t last = std::min(plan.trials, first + plan.chunk_size);
        run_trials(sampler, stream, plan, threshold, first, last, counts);
    });

    JointOutageCounts total;
    total.trials = plan.trials;
    for (auto& slot : total.counts) slot.assign(plan.max_rounds, 0);
    for (const auto& counts : per_chunk) {
        for (std::size_t s = 0; s < 2; ++s) {
            for (unsigned l = 0; l < plan.max_rounds; ++l) total.counts[s][l] += counts[s][l];
        }
    }
    return total;
}

OutageEstimate estimate_outage(const channel::NetworkConfig& net, const channel::PhaseConfig& phases,
                               const SimulationPlan& plan) {
    return estimate_outage_joint(net, phases, plan).estimate(plan.scheme, plan.max_rounds, plan.seed);
}

}  // namespace harqris::montecarlo
