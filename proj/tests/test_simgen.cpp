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
 * @file test_simgen.cpp
 *
 *****************************************************************************/

#include "jpji/numerics.hpp"
#include "jpji/simgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace jpji;

namespace {

template <class F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no jpji::Error thrown";
    return ErrorKind::Io;
}

}  // namespace

TEST(ScenarioSpec, Validation)
{
    ScenarioSpec s;
    EXPECT_NO_THROW(s.validate());
    s.clusters = 3;  // clusters of 3, 3 and 4 with partially-joint sources
    EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidSpec);
    s.C2 = 0;
    EXPECT_NO_THROW(s.validate());
    s = {};
    s.N = 6;
    EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidSpec);
    s = {};
    s.partition = {0, 1};
    EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidSpec);
    s = {};
    s.C1_range = std::pair{4, 2};
    EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidSpec);
    s = {};
    s.K = 15;
    s.clusters = 3;
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.cluster_of(), (std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2}));
}

TEST(SpatialSource, StandardizedAndSuperGaussian)
{
    BlobParams p;
    p.cells = {3, 40};
    for (std::uint64_t s = 0; s < 10; ++s) {
        const RowVector m = generate_spatial_source(4096, p, s);
        EXPECT_NEAR(m.mean(), 0.0, 1e-12);
        EXPECT_NEAR(m.squaredNorm() / 4096.0, 1.0, 1e-12);
        EXPECT_GT(excess_kurtosis(m), 3.0);
    }
    EXPECT_TRUE(generate_spatial_source(4096, p, 1) == generate_spatial_source(4096, p, 1));
}

TEST(Mixing, WellConditionedAndStandardized)
{
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix A = generate_mixing(150, 6, s);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const auto sv = svd.singularValues();
        EXPECT_LT(sv(0) / sv(sv.size() - 1), 1e3);
        for (int j = 0; j < 6; ++j) {
            EXPECT_NEAR(A.col(j).mean(), 0.0, 1e-12);
            EXPECT_NEAR(A.col(j).squaredNorm() / 150.0, 1.0, 1e-12);
        }
    }
}

TEST(Noise, EmpiricalSnr)
{
    const Matrix O = generate_mixing(100, 3, 1) * Matrix::Random(3, 4000);
    for (double snr : {-3.0, 3.0, 10.0}) {
        const Matrix N = add_noise(O, snr, 7) - O;
        const double measured = 10.0 * std::log10(O.squaredNorm() / N.squaredNorm());
        EXPECT_NEAR(measured, snr, 0.1);
    }
    EXPECT_TRUE(add_noise(O, std::numeric_limits<double>::infinity(), 7) == O);
}

TEST(Dataset, StructureMatchesSpec)
{
    ScenarioSpec s;
    s.seed = 12;
    const SimulatedData d = generate_dataset(s);
    ASSERT_EQ(d.datasets.size(), 10u);
    EXPECT_EQ(d.datasets[0].id, "sub-01");
    EXPECT_EQ(d.datasets[9].id, "sub-10");
    const GroundTruth& t = d.truth;
    EXPECT_EQ(t.joint_count, 3);
    std::map<int, std::vector<std::pair<int, int>>> by_map;
    for (int k = 0; k < 10; ++k) {
        EXPECT_EQ(d.datasets[k].n_time(), 150);
        EXPECT_EQ(d.datasets[k].n_voxels(), 4096);
        EXPECT_EQ(t.counts(k), (std::array<int, 3>{3, 2, 1}));
        EXPECT_LT((d.datasets[k].observations - t.mixing[k] * t.sources[k]).norm(),
                  1e-10 * d.datasets[k].observations.norm());
        for (std::size_t c = 0; c < t.labels[k].size(); ++c) by_map[t.map_ids[k][c]].push_back({k, int(c)});
    }
    // shared maps are identical, peers are exactly the other holders
    for (const auto& [id, holders] : by_map) {
        for (const auto& [k, c] : holders) {
            const auto& first = holders.front();
            EXPECT_TRUE(t.sources[k].row(c) == t.sources[first.first].row(first.second));
            std::vector<int> peers;
            for (const auto& h : holders)
                if (h.first != k) peers.push_back(h.first);
            EXPECT_EQ(t.labels[k][c].peers(), peers);
            if (t.labels[k][c].kind() == SourceKind::PartiallyJoint)
                for (int p : peers) EXPECT_EQ(t.cluster_of[p], t.cluster_of[k]);
        }
    }
    // distinct maps are nearly uncorrelated
    std::vector<RowVector> maps;
    for (const auto& [id, holders] : by_map) maps.push_back(t.sources[holders[0].first].row(holders[0].second));
    for (std::size_t i = 0; i < maps.size(); ++i)
        for (std::size_t j = i + 1; j < maps.size(); ++j) EXPECT_LE(std::abs(correlation(maps[i], maps[j])), 0.1);
}

TEST(Dataset, DeterministicPerSeed)
{
    ScenarioSpec s;
    s.V = 1024;
    s.N = 50;
    s.snr_db = 3.0;
    s.seed = 5;
    const SimulatedData a = generate_dataset(s), b = generate_dataset(s);
    for (int k = 0; k < 10; ++k) EXPECT_TRUE(a.datasets[k].observations == b.datasets[k].observations);
    s.seed = 6;
    const SimulatedData c = generate_dataset(s);
    EXPECT_FALSE(a.datasets[0].observations == c.datasets[0].observations);
}

TEST(Dataset, CountRangesAndPartition)
{
    ScenarioSpec s;
    s.V = 1024;
    s.N = 40;
    s.C1_range = std::pair{1, 4};
    s.C2_range = std::pair{0, 2};
    s.partition = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        s.seed = seed;
        const SimulatedData d = generate_dataset(s);
        EXPECT_GE(d.C1, 1);
        EXPECT_LE(d.C1, 4);
        EXPECT_GE(d.C2, 0);
        EXPECT_LE(d.C2, 2);
        EXPECT_EQ(d.truth.cluster_of, s.partition);
        EXPECT_EQ(d.truth.counts(0)[0], d.C1);
    }
}
