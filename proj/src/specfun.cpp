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

#include "harqris/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "harqris/error.hpp"

namespace harqris::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10'000'000;

void require_gamma_args(double a, double x) {
    if (!std::isfinite(a) || !(a > 0.0)) {
        throw DomainError("incomplete gamma: shape must be positive and finite, got " + std::to_string(a));
    }
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("incomplete gamma: argument must be nonnegative and finite, got " + std::to_string(x));
    }
}

// Remainder of Stirling's series: ln Gamma(a + 1) - [(a + 1/2) ln a - a + ln(2 pi) / 2].
double stirling_remainder(double a) {
    static constexpr double kCoeff[] = {
        1.0 / 12.0,          -1.0 / 360.0,   1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0,
    };
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    double power = inv;
    double sum = 0.0;
    for (double c : kCoeff) {
        sum += c * power;
        power *= inv2;
    }
    return sum;
}

// ln( x^a e^{-x} / Gamma(a + 1) ). For large a the dominant terms are
// folded into a * log1pmx((x - a) / a) so nothing large cancels.
double log_power_prefix(double a, double x) {
    if (a >= 10.0) {
        const double t = (x - a) / a;
        // Near x = a the log1pmx form avoids cancellation; far from it, 1 + t
        // is better formed as x / a directly.
        const double core = std::fabs(t) < 0.5 ? a * log1pmx(t) : a * std::log(x / a) - (x - a);
        return core - 0.5 * std::log(2.0 * std::numbers::pi * a) - stirling_remainder(a);
    }
    return a * std::log(x) - x - log_gamma(a + 1.0);
}

// P(a, x) by the power series; valid (and used) for x < a + 1.
double lower_series(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < sum * kEps) {
            return std::exp(log_power_prefix(a, x)) * sum;
        }
    }
    throw NumericError("incomplete gamma series did not converge");
}

// Q(a, x) by the modified Lentz continued fraction; used for x >= a + 1.
double upper_fraction(double a, double x) {
    constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            // x^a e^{-x} / Gamma(a) = a * x^a e^{-x} / Gamma(a + 1)
            return std::exp(log_power_prefix(a, x) + std::log(a)) * h;
        }
    }
    throw NumericError("incomplete gamma continued fraction did not converge");
}

}  // namespace

void TruncationPolicy::validate() const {
    if (mode == Mode::Adaptive && !(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw DomainError("truncation tolerance must lie in (0, 1)");
    }
}

void CompensatedSum::add(double term) noexcept {
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
        compensation_ += (sum_ - t) + term;
    } else {
        compensation_ += (term - t) + sum_;
    }
    sum_ = t;
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: argument must be positive and finite");
    }
#if defined(__GLIBC__) || defined(__APPLE__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double log1pmx(double t) {
    if (!(t > -1.0)) throw DomainError("log1pmx: argument must exceed -1");
    if (std::fabs(t) >= 0.5) return std::log1p(t) - t;
    // -t^2/2 + t^3/3 - t^4/4 + ...
    double power = t * t;
    double sum = 0.0;
    for (int k = 2; k < 200; ++k) {
        const double term = power / k;
        sum += (k % 2 == 0) ? -term : term;
        if (std::fabs(term) <= std::fabs(sum) * kEps) break;
        power *= t;
    }
    return sum;
}

double reg_lower_gamma(double a, double x) {
    require_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::min(1.0, lower_series(a, x));
    return std::clamp(1.0 - upper_fraction(a, x), 0.0, 1.0);
}

double reg_upper_gamma(double a, double x) {
    require_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - lower_series(a, x), 0.0, 1.0);
    return std::min(1.0, upper_fraction(a, x));
}

double log_poisson_weight(double xi, std::uint64_t i) {
    if (!std::isfinite(xi) || xi < 0.0) {
        throw DomainError("Poisson weight: mean must be nonnegative and finite");
    }
    if (xi == 0.0) {
        return i == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(i);
    return -xi + n * std::log(xi) - log_gamma(n + 1.0);
}

double poisson_upper_tail(double xi, std::uint64_t m) {
    if (!std::isfinite(xi) || xi < 0.0) {
        throw DomainError("Poisson tail: mean must be nonnegative and finite");
    }
    if (xi == 0.0) return 0.0;
    return reg_lower_gamma(static_cast<double>(m) + 1.0, xi);
}

double poisson_gamma_tail_bound(double xi, double a, double x, std::uint64_t m) {
    require_gamma_args(a, x);
    const double tail = poisson_upper_tail(xi, m);
    if (tail == 0.0) return 0.0;
    return tail * reg_lower_gamma(a + static_cast<double>(m) + 1.0, x);
}

SeriesValue poisson_gamma_mixture(double xi, double a, double x, const TruncationPolicy& policy) {
    policy.validate();
    require_gamma_args(a, x);
    if (!std::isfinite(xi) || xi < 0.0) {
        throw DomainError("Poisson-gamma series: non-centrality must be nonnegative and finite");
    }

    const bool adaptive = policy.mode == TruncationPolicy::Mode::Adaptive;
    const unsigned last = adaptive ? kMaxSeriesOrder : policy.fixed_order;

    CompensatedSum sum;
    SeriesValue out;
    bool converged = !adaptive;
    for (unsigned i = 0; i <= last; ++i) {
        const double gamma_part = reg_lower_gamma(a + i, x);
        const double log_w = log_poisson_weight(xi, i);
        if (gamma_part > 0.0 && std::isfinite(log_w)) {
            sum.add(std::exp(log_w + std::log(gamma_part)));
        }
        out.order = i;
        if (adaptive) {
            // Past the Poisson mode with an exhausted gamma factor nothing else contributes.
            const double bound = gamma_part == 0.0 ? 0.0 : poisson_gamma_tail_bound(xi, a, x, i);
            // Tolerance holds absolutely and relative to the partial sum, so
            // deep-tail probabilities keep their leading digits.
            if (bound <= policy.tail_tolerance * std::min(1.0, sum.value())) {
                out.tail_bound = bound;
                converged = true;
                break;
            }
        }
    }
    if (!converged) {
        throw TruncationError("adaptive truncation did not reach tolerance within order " +
                              std::to_string(kMaxSeriesOrder));
    }
    if (!adaptive) out.tail_bound = poisson_gamma_tail_bound(xi, a, x, out.order);

    double raw = sum.value();
    if (adaptive && raw > 0.5) {
        // Near 1 the lower series only carries absolute accuracy tol; the
        // complementary series sum_i w_i Q(a + i, x) recovers the small gap.
        CompensatedSum upper;
        converged = false;
        for (unsigned i = 0; i <= kMaxSeriesOrder; ++i) {
            const double log_w = log_poisson_weight(xi, i);
            const double q = reg_upper_gamma(a + i, x);
            if (q > 0.0 && std::isfinite(log_w)) upper.add(std::exp(log_w + std::log(q)));
            // Q(a + i, x) <= 1, so the remainder is at most the Poisson tail.
            const double bound = poisson_upper_tail(xi, i);
            if (bound <= policy.tail_tolerance * std::min(1.0, upper.value())) {
                out.order = std::max(out.order, i);
                out.tail_bound = bound;
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw TruncationError("adaptive truncation did not reach tolerance within order " +
                                  std::to_string(kMaxSeriesOrder));
        }
        raw = 1.0 - upper.value();
    }
    if (raw > 1.0 + 1e-9 || raw < -1e-9) {
        throw NumericError("Poisson-gamma series left [0, 1]: " + std::to_string(raw));
    }
    out.value = std::clamp(raw, 0.0, 1.0);
    return out;
}

}  // namespace harqris::specfun
