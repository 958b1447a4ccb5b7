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

#include "harqris/analytic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "harqris/error.hpp"
#include "harqris/parallel.hpp"

namespace harqris::analytic {

namespace {

void require_stats(const ChannelStats& stats) {
    if (!(stats.psi_gnlos > 0.0) || !std::isfinite(stats.psi_gnlos)) {
        throw DomainError("gain distribution needs a positive diffuse power");
    }
    if (!(stats.psi_glos >= 0.0) || !std::isfinite(stats.psi_glos)) {
        throw DomainError("LoS power must be nonnegative and finite");
    }
}

void require_rounds(unsigned rounds) {
    if (rounds < 1) throw DomainError("number of HARQ rounds must be at least 1");
}

void require_point(double x) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("CDF argument must be nonnegative and finite");
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::TypeI ? "type-i" : "cc";
}

Scheme parse_scheme(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "type-i" || lower == "typei" || lower == "type1" || lower == "type-1") return Scheme::TypeI;
    if (lower == "cc" || lower == "chase" || lower == "chase-combining") return Scheme::ChaseCombining;
    throw ConfigError("unknown HARQ scheme '" + std::string(text) + "' (expected type-i or cc)");
}

std::string_view to_string(CurveKind kind) noexcept {
    switch (kind) {
        case CurveKind::Exact: return "exact";
        case CurveKind::Asymptotic: return "asymptotic";
        case CurveKind::MonteCarlo: return "monte-carlo";
    }
    return "exact";
}

void HarqParams::validate() const {
    if (max_rounds < 1) throw ConfigError("harq.rounds must be at least 1");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("harq.rate must be positive");
    for (double rho : snr_grid) {
        if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("SNR grid values must be positive");
    }
}

void OutageCurve::validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!(e.p_out >= 0.0 && e.p_out <= 1.0)) throw NumericError("outage probability outside [0, 1]");
        if (i > 0 && e.rho < entries[i - 1].rho) throw ConfigError("outage curve is not sorted by SNR");
        if (e.std_error.has_value() != (e.kind == CurveKind::MonteCarlo)) {
            throw ConfigError("standard error must be present exactly for Monte-Carlo points");
        }
        if (e.std_error && *e.std_error < 0.0) throw NumericError("negative standard error");
    }
}

double outage_threshold(double rate, double rho) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("rate must be positive and finite");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("SNR must be positive and finite");
    return std::expm1(rate * std::numbers::ln2) / rho;
}

specfun::SeriesValue gain_cdf_series(const ChannelStats& stats, double x, const TruncationPolicy& policy) {
    return sum_gain_cdf_series(stats, 1, x, policy);
}

double gain_cdf(const ChannelStats& stats, double x, const TruncationPolicy& policy) {
    return gain_cdf_series(stats, x, policy).value;
}

specfun::SeriesValue sum_gain_cdf_series(const ChannelStats& stats, unsigned rounds, double x,
                                         const TruncationPolicy& policy) {
    require_stats(stats);
    require_rounds(rounds);
    require_point(x);
    return specfun::poisson_gamma_mixture(stats.xi(rounds), static_cast<double>(rounds), x / stats.psi_gnlos, policy);
}

double sum_gain_cdf(const ChannelStats& stats, unsigned rounds, double x, const TruncationPolicy& policy) {
    return sum_gain_cdf_series(stats, rounds, x, policy).value;
}

OutageValue outage_type1(const ChannelStats& stats, unsigned rounds, double rate, double rho,
                         const TruncationPolicy& policy) {
    require_rounds(rounds);
    const auto f = gain_cdf_series(stats, outage_threshold(rate, rho), policy);
    return {std::pow(f.value, static_cast<double>(rounds)), f.order};
}

OutageValue outage_cc(const ChannelStats& stats, unsigned rounds, double rate, double rho,
                      const TruncationPolicy& policy) {
    const auto f = sum_gain_cdf_series(stats, rounds, outage_threshold(rate, rho), policy);
    return {f.value, f.order};
}

OutageValue outage(const ChannelStats& stats, const HarqParams& harq, double rho, const TruncationPolicy& policy) {
    return harq.scheme == Scheme::TypeI ? outage_type1(stats, harq.max_rounds, harq.rate, rho, policy)
                                        : outage_cc(stats, harq.max_rounds, harq.rate, rho, policy);
}

double asymptotic_outage(const ChannelStats& stats, Scheme scheme, unsigned rounds, double rate, double rho) {
    require_stats(stats);
    require_rounds(rounds);
    const double psi = outage_threshold(rate, rho);
    const double l = static_cast<double>(rounds);
    double log_p = -stats.xi(rounds) + l * std::log(psi / stats.psi_gnlos);
    if (scheme == Scheme::ChaseCombining) log_p -= specfun::log_gamma(l + 1.0);
    return std::exp(log_p);
}

double snr_offset_factor(const ChannelStats& stats, unsigned rounds) {
    require_stats(stats);
    require_rounds(rounds);
    return std::exp(-stats.xi(rounds) - static_cast<double>(rounds) * std::log(stats.psi_gnlos));
}

double coding_gain(Scheme scheme, unsigned rounds, double rate) {
    require_rounds(rounds);
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("rate must be positive and finite");
    const double type1 = 1.0 / std::expm1(rate * std::numbers::ln2);
    if (scheme == Scheme::TypeI) return type1;
    const double l = static_cast<double>(rounds);
    return std::exp(specfun::log_gamma(l + 1.0) / l) * type1;
}

OutageCurve exact_curve(const ChannelStats& stats, const HarqParams& harq, const TruncationPolicy& policy,
                        unsigned workers) {
    harq.validate();
    auto grid = harq.snr_grid;
    std::sort(grid.begin(), grid.end());
    OutageCurve curve;
    curve.entries.resize(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        const auto v = outage(stats, harq, grid[i], policy);
        curve.entries[i] = {grid[i], v.p_out, CurveKind::Exact, std::nullopt, v.truncation_order};
    });
    return curve;
}

OutageCurve asymptotic_curve(const ChannelStats& stats, const HarqParams& harq) {
    harq.validate();
    auto grid = harq.snr_grid;
    std::sort(grid.begin(), grid.end());
    OutageCurve curve;
    for (double rho : grid) {
        // The leading term is not a probability at low SNR; cap it so the curve stays one.
        const double p = std::min(1.0, asymptotic_outage(stats, harq.scheme, harq.max_rounds, harq.rate, rho));
        curve.entries.push_back({rho, p, CurveKind::Asymptotic, std::nullopt, 0});
    }
    return curve;
}

DiversityFit fit_diversity(const OutageCurve& curve, SnrWindow window) {
    if (!(window.rho_min > 0.0) || !(window.rho_max >= window.rho_min)) {
        throw FitError("fit window must satisfy 0 < rho_min <= rho_max");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& e : curve.entries) {
        if (e.rho < window.rho_min || e.rho > window.rho_max || e.p_out < kFitFloor) continue;
        xs.push_back(std::log10(e.rho));
        ys.push_back(std::log10(e.p_out));
    }
    if (xs.size() < 3) {
        throw FitError("diversity fit needs at least 3 points above the numeric floor, got " +
                       std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("diversity fit needs at least two distinct SNR values");

    DiversityFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.diversity = -fit.slope;
    fit.window = window;
    fit.points = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.residual = std::max(fit.residual, std::fabs(ys[i] - (fit.intercept + fit.slope * xs[i])));
    }
    return fit;
}

}  // namespace harqris::analytic
