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
#include <complex>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "harqris/error.hpp"
#include "harqris/optimizer.hpp"

using namespace harqris;
using namespace harqris::optimizer;

namespace {

constexpr double kPi = std::numbers::pi;
const auto kAdaptive = specfun::TruncationPolicy::adaptive(1e-12);

// |mu|^2 written out from the link parameters, for a single-element network.
double single_element_los_power(const channel::NetworkConfig& net, double theta) {
    const auto& d = net.direct;
    const auto& p = net.panels.front();
    const double a = std::sqrt(d.beta_sd * d.kappa_sd / (d.kappa_sd + 1.0));
    const double c = std::sqrt(p.beta_sr * p.beta_rd * p.kappa_rd / (p.kappa_rd + 1.0));
    const auto mu = std::polar(a, d.los_phase_sd) + std::polar(c, p.los_phases_rd[0] + theta + p.los_phases_sr[0]);
    return std::norm(mu);
}

channel::NetworkConfig single_element(double sd, double sr, double rd) {
    channel::NetworkConfig net;
    net.direct = {0.3, 2.0, sd};
    channel::RisPanel p;
    p.n_elements = 1;
    p.beta_sr = 0.8;
    p.beta_rd = 0.5;
    p.kappa_rd = 1.5;
    p.los_phases_sr = {sr};
    p.los_phases_rd = {rd};
    net.panels.push_back(p);
    return net;
}

analytic::HarqParams harq_grid(analytic::Scheme scheme, unsigned rounds) {
    analytic::HarqParams h{scheme, rounds, 4.0, {}};
    for (double db = 0.0; db <= 50.0; db += 2.5) h.snr_grid.push_back(std::pow(10.0, db / 10.0));
    return h;
}

}  // namespace

TEST_CASE("aligned links need no shift") {
    auto net = fixtures::reference_network();
    net.direct.los_phase_sd = 0.0;
    for (auto& p : net.panels) {
        std::fill(p.los_phases_sr.begin(), p.los_phases_sr.end(), 0.0);
        std::fill(p.los_phases_rd.begin(), p.los_phases_rd.end(), 0.0);
    }
    const auto sol = optimal_phases(net);
    for (const auto& row : sol.phases.thetas)
        for (double t : row) CHECK(t == 0.0);
}

TEST_CASE("single element matches a dense grid search") {
    const auto net = single_element(kPi / 4.0, kPi / 6.0, kPi / 3.0);
    const auto sol = optimal_phases(net);
    const double theta = sol.phases.thetas[0][0];
    CHECK(theta == doctest::Approx(7.0 * kPi / 4.0).epsilon(1e-14));

    const int n = 200000;
    double best = -1.0;
    double best_theta = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        const double v = single_element_los_power(net, t);
        if (v > best) {
            best = v;
            best_theta = t;
        }
    }
    const double dist = std::fabs(std::remainder(best_theta - theta, 2.0 * kPi));
    CHECK(dist <= 2.0 * kPi / n);
    CHECK(sol.psi_glos_achieved >= best);
    CHECK(sol.psi_glos_achieved == doctest::Approx(single_element_los_power(net, theta)).epsilon(1e-14));
}

TEST_CASE("optimal phases beat random baselines and reach the bound") {
    std::mt19937_64 gen(99);
    std::vector<channel::NetworkConfig> nets{fixtures::reference_network()};
    for (int i = 0; i < 3; ++i) nets.push_back(fixtures::random_network(gen));
    for (const auto& net : nets) {
        const auto sol = optimal_phases(net);
        CHECK(sol.upper_bound == channel::los_power_upper_bound(net));
        CHECK(std::fabs(sol.psi_glos_achieved - sol.upper_bound) <= 1e-12 * sol.upper_bound);
        CHECK(sol.gap <= 1e-10 * sol.upper_bound);
        for (const auto& row : sol.phases.thetas)
            for (double t : row) {
                CHECK(t >= 0.0);
                CHECK(t < 2.0 * kPi);
            }
        for (int i = 0; i < 10000; ++i) {
            const auto random = channel::PhaseConfig::random(net, gen());
            CHECK(channel::compute_stats(net, random).psi_glos < sol.psi_glos_achieved);
        }
    }
}

TEST_CASE("no direct line of sight aligns to phase zero") {
    auto net = fixtures::reference_network();
    net.direct.kappa_sd = 0.0;
    const auto sol = optimal_phases(net);
    for (std::size_t k = 0; k < net.panels.size(); ++k)
        for (std::size_t n = 0; n < net.panels[k].n_elements; ++n)
            CHECK(sol.phases.thetas[k][n] ==
                  doctest::Approx(channel::wrap_phase(-net.panels[k].los_phases_sr[n] - net.panels[k].los_phases_rd[n])));
    CHECK(std::fabs(sol.gap) <= 1e-12 * sol.upper_bound);
    CHECK(std::arg(channel::compute_stats(net, sol.phases).mu) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a network without elements is rejected") {
    channel::NetworkConfig net;
    net.direct = {1.0, 1.0, 0.0};
    CHECK_THROWS_AS(optimal_phases(net), ConfigError);
}

TEST_CASE("property: a global LoS rotation leaves the optimum unchanged") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 50; ++i) {
        const auto net = fixtures::random_network(gen);
        auto shifted = net;
        const double delta = angle(gen);
        shifted.direct.los_phase_sd = channel::wrap_phase(net.direct.los_phase_sd + delta);
        for (auto& p : shifted.panels)
            for (auto& v : p.los_phases_sr) v = channel::wrap_phase(v + delta);
        const auto a = optimal_phases(net);
        const auto b = optimal_phases(shifted);
        CHECK(b.psi_glos_achieved == doctest::Approx(a.psi_glos_achieved).epsilon(1e-12));
        // theta* = phi_sd - phi_sr - phi_rd: both shifts cancel.
        for (std::size_t k = 0; k < net.panels.size(); ++k)
            for (std::size_t n = 0; n < net.panels[k].n_elements; ++n)
                CHECK(std::fabs(std::remainder(b.phases.thetas[k][n] - a.phases.thetas[k][n], 2.0 * kPi)) <= 1e-12);
    }
}

TEST_CASE("property: the optimum minimizes asymptotic and exact outage") {
    std::mt19937_64 gen(23);
    for (int i = 0; i < 20; ++i) {
        const auto net = fixtures::random_network(gen);
        const auto best = channel::compute_stats(net, optimal_phases(net).phases);
        for (int j = 0; j < 20; ++j) {
            const auto other = channel::compute_stats(net, channel::PhaseConfig::random(net, gen()));
            for (auto scheme : {analytic::Scheme::TypeI, analytic::Scheme::ChaseCombining}) {
                for (double rho : {1.0, 30.0, 1e3}) {
                    CHECK(analytic::asymptotic_outage(best, scheme, 3, 2.0, rho) <=
                          analytic::asymptotic_outage(other, scheme, 3, 2.0, rho));
                    analytic::HarqParams h{scheme, 3, 2.0, {}};
                    CHECK(analytic::outage(best, h, rho, kAdaptive).p_out <=
                          analytic::outage(other, h, rho, kAdaptive).p_out + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("strategy comparison keeps the optimal curve lowest") {
    const auto net = fixtures::reference_network();
    for (auto scheme : {analytic::Scheme::TypeI, analytic::Scheme::ChaseCombining}) {
        const auto h = harq_grid(scheme, 4);
        const auto a = compare_strategies(net, h, kAdaptive, 1);
        const auto b = compare_strategies(net, h, kAdaptive, 2);
        bool differ = false;
        for (std::size_t i = 0; i < h.snr_grid.size(); ++i) {
            const double opt = a.optimal.curve.entries[i].p_out;
            CHECK(opt <= a.fixed.curve.entries[i].p_out);
            CHECK(opt <= a.random.curve.entries[i].p_out);
            CHECK(opt <= b.random.curve.entries[i].p_out);
            differ = differ || a.random.curve.entries[i].p_out != b.random.curve.entries[i].p_out;
        }
        CHECK(differ);
        for (const auto& row : a.fixed.phases.thetas)
            for (double t : row) CHECK(t == doctest::Approx(kFixedStrategyPhase));
    }
}

TEST_CASE("strategies coincide when reflected links carry no LoS") {
    auto net = single_element(0.0, 0.0, 0.0);
    net.panels[0].kappa_rd = 0.0;
    const auto h = harq_grid(analytic::Scheme::ChaseCombining, 2);
    const auto c = compare_strategies(net, h, kAdaptive, 5, 0.0);
    for (std::size_t i = 0; i < h.snr_grid.size(); ++i) {
        CHECK(c.fixed.curve.entries[i].p_out == c.optimal.curve.entries[i].p_out);
        CHECK(c.random.curve.entries[i].p_out == c.optimal.curve.entries[i].p_out);
    }
}
