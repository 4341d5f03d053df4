// Copyright 2026 The qsnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSNN_TYPES_H
#define QSNN_TYPES_H

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qsnn {

using Qubit = std::uint32_t;
using NodeId = std::uint32_t;

/// One bit per entry, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Every random draw in the library goes through this engine so seeds are portable
/// between the CLI, the tests and the benchmarks.
using Rng = std::mt19937_64;

/// Supervised pair. For reconstruction models the target equals the input.
struct Sample {
    Bits input;
    Bits target;
    int label = -1;
};

using Dataset = std::vector<Sample>;

/// "0110" style rendering, index 0 first.
inline std::string bits_to_string(const Bits &bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

/// Bit k of `index` becomes entry k.
inline Bits index_to_bits(std::uint64_t index, std::size_t width) {
    Bits bits(width);
    for (std::size_t k = 0; k < width; ++k) {
        bits[k] = static_cast<std::uint8_t>((index >> k) & 1U);
    }
    return bits;
}

inline std::uint64_t bits_to_index(const Bits &bits) {
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) {
            index |= std::uint64_t{1} << k;
        }
    }
    return index;
}

/// Derives an independent stream for `index` from `seed` (splitmix64 finalizer).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; portable across standard libraries.
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = rng();
    while (r >= limit) {
        r = rng();
    }
    return r % n;
}

/// Fisher-Yates with `uniform_index`, so results do not depend on the standard library.
template <typename T>
void shuffle(std::vector<T> &items, Rng &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

}  // namespace qsnn

#endif  // QSNN_TYPES_H
