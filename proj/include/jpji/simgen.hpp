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
 * @file simgen.hpp Synthetic multi-subject datasets with joint,
 * partially-joint and individual sources.
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace jpji {

struct ScenarioSpec {
    int K = 10;
    int C1 = 3;
    int C2 = 2;                                      // per subject, shared within its cluster
    int C3 = 1;
    std::optional<std::pair<int, int>> C1_range;      // uniform draw, overrides C1
    std::optional<std::pair<int, int>> C2_range;      // uniform draw, overrides C2
    int clusters = 2;
    std::vector<int> partition;                       // explicit cluster index per subject
    int V = 4096;
    int N = 150;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    void validate() const;
    std::vector<int> cluster_of() const;
};

struct BlobParams {
    int n_blobs = 2;
    double sigma_min = 1.2;
    double sigma_max = 2.2;
    int cell_size = 8;
    std::vector<int> cells;     // lattice cell per blob, -1 for a uniform position
    bool zero_mass = true;      // amplitudes cancel the total blob mass
    double background = 0.02;
};

/// Gaussian blobs on a sqrt(V) x sqrt(V) grid (a line when V is not a
/// square), plus white background, standardized.
RowVector generate_spatial_source(int V, const BlobParams& params, std::uint64_t seed);

struct SimulatedData {
    std::vector<SubjectDataset> datasets;
    GroundTruth truth;
    int C1 = 0;
    int C2 = 0;
};

SimulatedData generate_dataset(const ScenarioSpec& spec);

/// Gaussian noise with variance mean(O^2) / 10^(snr_db / 10).
Matrix add_noise(const Matrix& O, double snr_db, std::uint64_t seed);

/// Smoothed random time courses, standardized per column, cond < 1e3.
Matrix generate_mixing(int N, int C, std::uint64_t seed);

}  // namespace jpji
