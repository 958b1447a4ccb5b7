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

namespace harqris::specfun {

/// How many terms of a Poisson-weighted gamma series to keep.
///
/// Fixed mode sums terms 0..fixed_order inclusive. Adaptive mode grows the
/// order until the certified remainder bound drops to tail_tolerance, both
/// absolutely and relative to the partial sum.
struct TruncationPolicy {
    enum class Mode { Fixed, Adaptive };

    Mode mode = Mode::Adaptive;
    unsigned fixed_order = 50;
    double tail_tolerance = 1e-12;

    static TruncationPolicy fixed(unsigned order = 50) { return {Mode::Fixed, order, 1e-12}; }
    static TruncationPolicy adaptive(double tolerance = 1e-12) { return {Mode::Adaptive, 50, tolerance}; }

    /// Throws DomainError unless 0 < tail_tolerance < 1.
    void validate() const;
};

/// Adaptive truncation gives up past this order.
inline constexpr unsigned kMaxSeriesOrder = 100000;

/// Error-compensated running sum (Neumaier's variant of Kahan summation).
class CompensatedSum {
public:
    void add(double term) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// ln Gamma(x) for x > 0. Reentrant.
double log_gamma(double x);

/// log(1 + t) - t, accurate for small |t|. Requires t > -1.
double log1pmx(double t);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
///
/// Uses the power series below x = a + 1 and Legendre's continued fraction
/// for the complement above. Throws DomainError for a <= 0, x < 0 or any
/// non-finite argument.
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation on either side of the split.
double reg_upper_gamma(double a, double x);

/// ln of the Poisson(xi) mass at i: -xi + i ln xi - ln i!.
/// Returns 0 for (xi = 0, i = 0) and -inf for (xi = 0, i > 0).
double log_poisson_weight(double xi, std::uint64_t i);

/// Pr[N > m] for N ~ Poisson(xi), via the identity Pr[N <= m] = Q(m + 1, xi).
double poisson_upper_tail(double xi, std::uint64_t m);

/// Upper bound on sum_{i > m} w_i(xi) P(a + i, x).
///
/// P(a + i, x) is nonincreasing in i, so the remainder is at most the
/// Poisson upper-tail mass beyond m times P(a + m + 1, x). Nonincreasing in m.
double poisson_gamma_tail_bound(double xi, double a, double x, std::uint64_t m);

struct SeriesValue {
    double value = 0.0;       ///< truncated sum, clamped to [0, 1]
    unsigned order = 0;       ///< last index kept
    double tail_bound = 0.0;  ///< certified bound on the dropped remainder
};

/// sum_i w_i(xi) P(a + i, x) truncated per policy. This is the CDF of a
/// scaled non-central chi-squared variate with 2a degrees of freedom and
/// non-centrality xi (in the Poisson-mixture parametrization).
///
/// In adaptive mode a value above 1/2 is recomputed as 1 - sum_i w_i Q(a + i, x),
/// so probabilities near 1 stay accurate to rounding rather than to the
/// tolerance. Fixed mode always truncates the lower series.
///
/// Throws TruncationError if adaptive mode hits kMaxSeriesOrder and
/// NumericError if the raw sum leaves [0, 1] by more than 1e-9.
SeriesValue poisson_gamma_mixture(double xi, double a, double x, const TruncationPolicy& policy);

}  // namespace harqris::specfun
