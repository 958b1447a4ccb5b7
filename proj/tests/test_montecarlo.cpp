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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "harqris/analytic.hpp"
#include "harqris/error.hpp"
#include "harqris/montecarlo.hpp"

using namespace harqris;
using namespace harqris::montecarlo;
using harqris::rng::CounterStream;
using harqris::rng::Philox4x32;

namespace {

const auto kAdaptive = specfun::TruncationPolicy::adaptive(1e-12);

// x with cdf(x) = q, by bisection.
template <class Cdf>
double quantile(Cdf cdf, double q) {
    double lo = 0.0;
    double hi = 1.0;
    while (cdf(hi) < q) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

channel::NetworkConfig rayleigh_network() {
    channel::NetworkConfig net;
    net.direct.beta_sd = 1.0;
    net.direct.kappa_sd = 0.0;
    net.direct.los_phase_sd = 0.0;
    return net;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32(Philox4x32::Key{0, 0})(C{0, 0, 0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32(Philox4x32::Key{0xffffffff, 0xffffffff})(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32(Philox4x32::Key{0xa4093822, 0x299f31d0})(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform draws stay inside the open interval") {
    CHECK(rng::open_unit(0, 0) > 0.0);
    CHECK(rng::open_unit(0xffffffff, 0xffffffff) < 1.0);
    const CounterStream s(9);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double a = s.angle({static_cast<std::uint64_t>(i), 0, 0});
        CHECK(a >= 0.0);
        CHECK(a < 2.0 * std::numbers::pi);
        sum += s.uniform({static_cast<std::uint64_t>(i), 1, 0});
    }
    CHECK(std::fabs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("pure line-of-sight channel is deterministic") {
    auto net = fixtures::reference_network();
    net.direct.kappa_sd = std::numeric_limits<double>::infinity();
    for (auto& p : net.panels) p.kappa_rd = std::numeric_limits<double>::infinity();
    const auto phases = fixtures::reference_phases(net);
    const ChannelSampler sampler(net, phases);
    const auto mu = channel::compute_stats(net, phases).mu;
    const CounterStream s(4);
    for (std::uint64_t t = 0; t < 10; ++t) {
        const auto h = sampler.sample(s, t, 2);
        CHECK(std::abs(h - mu) <= 1e-13 * std::abs(mu));
    }
}

TEST_CASE("sampler moments match the channel statistics") {
    const auto net = fixtures::reference_network();
    const auto phases = fixtures::reference_phases(net);
    const auto stats = channel::compute_stats(net, phases);
    const ChannelSampler sampler(net, phases);
    CHECK(std::abs(sampler.mean() - stats.mu) <= 1e-14 * std::abs(stats.mu));

    const CounterStream s(77);
    const std::size_t n = 1'000'000;
    std::complex<double> sum{};
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = sampler.sample(s, i, 0) - stats.mu;
        sum += d;
        sq += std::norm(d);
    }
    CHECK(std::abs(sum / static_cast<double>(n)) <= 4.0 * std::sqrt(stats.psi_gnlos / n));
    CHECK(std::fabs(sq / n / stats.psi_gnlos - 1.0) <= 0.02);
}

TEST_CASE("empirical CDFs follow the analytic ones at 20 quantiles") {
    const auto net = fixtures::reference_network();
    const auto phases = fixtures::reference_phases(net);
    const auto stats = channel::compute_stats(net, phases);
    const ChannelSampler sampler(net, phases);
    const CounterStream s(2024);
    const std::size_t n = 1'000'000;

    for (unsigned rounds : {1u, 3u}) {
        auto cdf = [&](double x) { return analytic::sum_gain_cdf(stats, rounds, x, kAdaptive); };
        std::vector<double> sums(n);
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned l = 0; l < rounds; ++l) sums[i] += std::norm(sampler.sample(s, i, l));
        for (int k = 0; k < 20; ++k) {
            const double q = (k + 0.5) / 20.0;
            const double x = quantile(cdf, q);
            const double f = cdf(x);
            std::size_t below = 0;
            for (double v : sums) below += v <= x;
            const double emp = static_cast<double>(below) / n;
            CHECK(std::fabs(emp - f) <= 3.0 * std::sqrt(f * (1.0 - f) / n));
        }
    }
}

TEST_CASE("accumulated information") {
    const std::vector<double> g{1.0, 3.0};
    CHECK(accumulated_information(g, Scheme::TypeI) == 2.0);
    CHECK(accumulated_information(g, Scheme::ChaseCombining) == doctest::Approx(std::log2(5.0)).epsilon(1e-15));
    CHECK_THROWS_AS(accumulated_information(std::span<const double>{}, Scheme::TypeI), DomainError);
}

TEST_CASE("simulation plan validation") {
    const auto net = rayleigh_network();
    const auto phases = channel::PhaseConfig::constant(net, 0.0);
    SimulationPlan plan;
    plan.trials = 0;
    CHECK_THROWS_AS(estimate_outage(net, phases, plan), ConfigError);
    plan.trials = 10;
    plan.max_rounds = 0;
    CHECK_THROWS_AS(estimate_outage(net, phases, plan), ConfigError);
    plan.max_rounds = 1;
    plan.rate = 0.0;
    CHECK_THROWS_AS(estimate_outage(net, phases, plan), ConfigError);
}

TEST_CASE("vanishing rate never drops a packet") {
    const auto net = rayleigh_network();
    SimulationPlan plan;
    plan.trials = 20000;
    plan.rate = 1e-12;
    plan.max_rounds = 2;
    const auto est = estimate_outage(net, channel::PhaseConfig::constant(net, 0.0), plan);
    CHECK(est.outages == 0);
    CHECK(est.p_hat == 0.0);
}

TEST_CASE("Rayleigh Type-I outage within three standard errors") {
    const auto net = rayleigh_network();
    SimulationPlan plan;
    plan.trials = 1'000'000;
    plan.seed = 31;
    plan.rate = 1.0;
    plan.rho = 1.0;
    plan.max_rounds = 2;
    const auto est = estimate_outage(net, channel::PhaseConfig::constant(net, 0.0), plan);
    const double p = 0.39957640089372805;
    CHECK(std::fabs(est.p_hat - p) <= 3.0 * std::sqrt(p * (1.0 - p) / plan.trials));
    CHECK(est.std_error == doctest::Approx(std::sqrt(est.p_hat * (1.0 - est.p_hat) / plan.trials)));
}

TEST_CASE("counts do not depend on workers or chunking") {
    const auto net = fixtures::reference_network();
    const auto phases = fixtures::reference_phases(net);
    SimulationPlan plan;
    plan.trials = 50'000;
    plan.seed = 8;
    plan.rate = 4.0;
    plan.rho = 400.0;
    plan.max_rounds = 4;
    plan.workers = 1;
    plan.chunk_size = 1 << 16;
    const auto base = estimate_outage_joint(net, phases, plan);
    for (unsigned workers : {2u, 3u, 5u}) {
        for (std::uint64_t chunk : {1000ull, 4097ull}) {
            plan.workers = workers;
            plan.chunk_size = chunk;
            const auto other = estimate_outage_joint(net, phases, plan);
            CHECK(other.counts == base.counts);
        }
    }
    plan.seed = 9;
    CHECK(estimate_outage_joint(net, phases, plan).counts != base.counts);
}

TEST_CASE("property: joint counts are nested") {
    std::mt19937_64 gen(6);
    for (int i = 0; i < 10; ++i) {
        const auto net = fixtures::random_network(gen);
        const auto phases = channel::PhaseConfig::random(net, gen());
        SimulationPlan plan;
        plan.trials = 20'000;
        plan.seed = gen();
        plan.rate = 2.0;
        plan.rho = 3.0;
        plan.max_rounds = 4;
        plan.workers = 1;
        const auto j = estimate_outage_joint(net, phases, plan);
        const auto& t1 = j.counts[static_cast<int>(Scheme::TypeI)];
        const auto& cc = j.counts[static_cast<int>(Scheme::ChaseCombining)];
        CHECK(t1[0] == cc[0]);
        for (unsigned l = 0; l < 4; ++l) {
            CHECK(cc[l] <= t1[l]);
            if (l > 0) {
                CHECK(t1[l] <= t1[l - 1]);
                CHECK(cc[l] <= cc[l - 1]);
            }
        }
        plan.scheme = Scheme::ChaseCombining;
        plan.max_rounds = 3;
        CHECK(estimate_outage(net, phases, plan).outages == cc[2]);
    }
}
