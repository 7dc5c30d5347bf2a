/******************************************************************************
 * Copyright 2026 The jpji-ica contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * @file rng.hpp Seed splitting and portable random draws.
 *
 *****************************************************************************/

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace jpji {

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a root seed and a path of
/// integers, e.g. split_seed(seed, {tag, sweep, subject, slot}).
std::uint64_t split_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

namespace tag {
inline constexpr std::uint64_t peers = 1;
inline constexpr std::uint64_t feature = 2;
inline constexpr std::uint64_t kmeans = 3;
inline constexpr std::uint64_t cluster = 4;
inline constexpr std::uint64_t maps = 5;
inline constexpr std::uint64_t mixing = 6;
inline constexpr std::uint64_t noise = 7;
inline constexpr std::uint64_t scenario = 8;
inline constexpr std::uint64_t baseline = 9;
}  // namespace tag

/// mt19937_64 with hand-rolled distributions so draws are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    std::uint64_t below(std::uint64_t n);   // [0, n)

    template <class T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace jpji
