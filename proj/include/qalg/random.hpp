// Copyright 2026 The qalg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

#include "qalg/linalg.hpp"

namespace qalg {

/// Seeded source of randomness for every randomized algorithm in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform and normal variates are derived here rather than through
/// <random> distributions, whose algorithms are implementation-defined, so a
/// seed reproduces the same numbers with any standard library.
class Rng {
  public:
    static constexpr const char* algorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Seeds from a base seed plus a stream label; used to give each
    /// independent job (block, sampling call) its own generator.
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed, stream)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal variate (Box-Muller, one value per call).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

    ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols) {
        ComplexMatrix out(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = complex_normal();
        }
        return out;
    }

    /// Random element sum_k g_k b_k with complex normal g_k.
    ComplexMatrix combination(std::span<const ComplexMatrix> basis) {
        if (basis.empty()) return {};
        ComplexMatrix out = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
        for (const auto& b : basis) out += complex_normal() * b;
        return out;
    }

    /// Hermitian part of a random combination; stays inside any *-closed span.
    ComplexMatrix hermitian_combination(std::span<const ComplexMatrix> basis) {
        return hermitian_part(combination(basis));
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 finalizer over the pair
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace qalg
