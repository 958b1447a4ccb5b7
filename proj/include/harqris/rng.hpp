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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace harqris::rng {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A block of four 32-bit outputs is a pure function of (key, counter), so
/// any draw can be reproduced from its coordinates alone, independent of the
/// order in which workers visit them.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(Key key) noexcept : key_(key) {}
    explicit constexpr Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    constexpr Counter operator()(Counter ctr) const noexcept {
        Key key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

    Key key_;
};

/// Maps two 32-bit words to a double uniform on the open interval (0, 1).
constexpr double open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    // 52 bits keep the midpoint of the top cell below 1.
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Addresses one draw: (stream, index, sub-index, lane). Each coordinate is a
/// plain integer, e.g. (trial, round, element) for the Monte-Carlo channel.
struct DrawAddress {
    std::uint64_t stream = 0;
    std::uint32_t index = 0;
    std::uint32_t lane = 0;
};

/// Keyed source of uniforms and circularly-symmetric complex Gaussians.
class CounterStream {
public:
    explicit constexpr CounterStream(std::uint64_t seed) noexcept : gen_(seed) {}

    constexpr Philox4x32::Counter block(const DrawAddress& at) const noexcept {
        return gen_({static_cast<std::uint32_t>(at.stream), static_cast<std::uint32_t>(at.stream >> 32), at.index,
                     at.lane});
    }

    /// Uniform on (0, 1).
    double uniform(const DrawAddress& at) const noexcept {
        const auto b = block(at);
        return open_unit(b[0], b[1]);
    }

    /// Uniform on [0, 2 pi).
    double angle(const DrawAddress& at) const noexcept {
        const double t = 2.0 * std::numbers::pi * uniform(at);
        return t < 2.0 * std::numbers::pi ? t : 0.0;
    }

    /// CN(0, 1): real and imaginary parts independent N(0, 1/2), by Box-Muller.
    std::complex<double> complex_normal(const DrawAddress& at) const noexcept {
        const auto b = block(at);
        const double radius = std::sqrt(-std::log(open_unit(b[0], b[1])));
        const double phase = 2.0 * std::numbers::pi * open_unit(b[2], b[3]);
        return {radius * std::cos(phase), radius * std::sin(phase)};
    }

private:
    Philox4x32 gen_;
};

}  // namespace harqris::rng
