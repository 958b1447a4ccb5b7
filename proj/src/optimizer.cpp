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

#include "harqris/optimizer.hpp"

#include "harqris/error.hpp"

namespace harqris::optimizer {

PhaseSolution optimal_phases(const channel::NetworkConfig& net) {
    net.validate();
    if (net.total_elements() == 0) {
        throw ConfigError("phase optimization needs at least one reflecting element");
    }
    const double target = channel::direct_los_amplitude(net.direct) > 0.0 ? net.direct.los_phase_sd : 0.0;

    PhaseSolution sol;
    for (const auto& p : net.panels) {
        auto& row = sol.phases.thetas.emplace_back(p.n_elements);
        for (std::size_t n = 0; n < p.n_elements; ++n) {
            row[n] = channel::wrap_phase(target - p.los_phases_sr[n] - p.los_phases_rd[n]);
        }
    }
    sol.psi_glos_achieved = channel::compute_stats(net, sol.phases).psi_glos;
    sol.upper_bound = channel::los_power_upper_bound(net);
    sol.gap = sol.upper_bound - sol.psi_glos_achieved;
    return sol;
}

StrategyComparison compare_strategies(const channel::NetworkConfig& net, const analytic::HarqParams& harq,
                                      const specfun::TruncationPolicy& policy, std::uint64_t random_seed,
                                      double fixed_theta, unsigned workers) {
    auto evaluate = [&](channel::PhaseConfig phases) {
        StrategyCurve s;
        s.stats = channel::compute_stats(net, phases);
        s.curve = analytic::exact_curve(s.stats, harq, policy, workers);
        s.phases = std::move(phases);
        return s;
    };
    StrategyComparison out;
    out.optimal = evaluate(optimal_phases(net).phases);
    out.fixed = evaluate(channel::PhaseConfig::constant(net, fixed_theta));
    out.random = evaluate(channel::PhaseConfig::random(net, random_seed));
    return out;
}

}  // namespace harqris::optimizer
