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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harqris/channel.hpp"
#include "harqris/specfun.hpp"

namespace harqris::analytic {

using channel::ChannelStats;
using specfun::TruncationPolicy;

enum class Scheme { TypeI, ChaseCombining };

/// "type-i" / "cc".
std::string_view to_string(Scheme scheme) noexcept;
/// Accepts "type-i", "typei", "type1", "cc", "chase", "chase-combining" (case-insensitive).
Scheme parse_scheme(std::string_view text);

struct HarqParams {
    Scheme scheme = Scheme::TypeI;
    unsigned max_rounds = 1;      ///< L
    double rate = 1.0;            ///< R, bits/s/Hz
    std::vector<double> snr_grid; ///< linear average SNRs

    void validate() const;
};

enum class CurveKind { Exact, Asymptotic, MonteCarlo };
std::string_view to_string(CurveKind kind) noexcept;

struct OutagePoint {
    double rho = 0.0;
    double p_out = 0.0;
    CurveKind kind = CurveKind::Exact;
    std::optional<double> std_error;  ///< Monte-Carlo only
    unsigned truncation_order = 0;    ///< exact only: last series index kept
};

struct OutageCurve {
    std::vector<OutagePoint> entries;

    /// Sorted by rho, probabilities in [0, 1], std_error present iff Monte-Carlo.
    void validate() const;
};

struct SnrWindow {
    double rho_min = 0.0;
    double rho_max = 0.0;
};

struct DiversityFit {
    double diversity = 0.0;  ///< d = -slope
    double slope = 0.0;      ///< of log10 p_out against log10 rho
    double intercept = 0.0;
    SnrWindow window;
    double residual = 0.0;   ///< max absolute log10 deviation from the line
    std::size_t points = 0;
};

/// Exact probabilities below this are excluded from slope fits.
inline constexpr double kFitFloor = 1e-14;

/// psi = (2^R - 1) / rho: the per-round (Type-I) or accumulated (CC)
/// channel gain needed to decode at rate R.
double outage_threshold(double rate, double rho);

/// CDF of the per-round gain |h_l|^2 (non-central chi-squared, 2 dof).
specfun::SeriesValue gain_cdf_series(const ChannelStats& stats, double x, const TruncationPolicy& policy);
double gain_cdf(const ChannelStats& stats, double x, const TruncationPolicy& policy);

/// CDF of sum_{l=1}^{L} |h_l|^2 over L independent rounds (non-central
/// chi-squared, 2L dof, non-centrality L psi_glos / psi_gnlos).
specfun::SeriesValue sum_gain_cdf_series(const ChannelStats& stats, unsigned rounds, double x,
                                         const TruncationPolicy& policy);
double sum_gain_cdf(const ChannelStats& stats, unsigned rounds, double x, const TruncationPolicy& policy);

struct OutageValue {
    double p_out = 0.0;
    unsigned truncation_order = 0;
};

/// Type-I: every one of L independently decoded rounds fails, [F(psi)]^L.
OutageValue outage_type1(const ChannelStats& stats, unsigned rounds, double rate, double rho,
                         const TruncationPolicy& policy);
/// Chase combining: the MRC-accumulated gain stays below psi.
OutageValue outage_cc(const ChannelStats& stats, unsigned rounds, double rate, double rho,
                      const TruncationPolicy& policy);
OutageValue outage(const ChannelStats& stats, const HarqParams& harq, double rho, const TruncationPolicy& policy);

/// High-SNR leading term: exp(-L psi_glos/psi_gnlos) (psi/psi_gnlos)^L,
/// further divided by L! for chase combining.
double asymptotic_outage(const ChannelStats& stats, Scheme scheme, unsigned rounds, double rate, double rho);

/// S = exp(-L psi_glos / psi_gnlos) psi_gnlos^{-L}; the same for both schemes.
double snr_offset_factor(const ChannelStats& stats, unsigned rounds);

/// C(R): (2^R - 1)^{-1} for Type-I, times (L!)^{1/L} for chase combining.
double coding_gain(Scheme scheme, unsigned rounds, double rate);

OutageCurve exact_curve(const ChannelStats& stats, const HarqParams& harq, const TruncationPolicy& policy,
                        unsigned workers = 1);
OutageCurve asymptotic_curve(const ChannelStats& stats, const HarqParams& harq);

/// Least-squares slope of log10 p_out against log10 rho over the points in
/// \p window with p_out >= kFitFloor. Throws FitError with fewer than 3.
DiversityFit fit_diversity(const OutageCurve& curve, SnrWindow window);

}  // namespace harqris::analytic
