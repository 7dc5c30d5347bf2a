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
 * @file test_kernels.cpp
 *
 *****************************************************************************/

#include "jpji/kernels.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace jpji;

namespace {

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return (a - b).norm() / std::max(1.0, b.norm());
}

Eigen::MatrixXd naive_project(const Matrix& Z, const Matrix& P)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Z.rows(), P.rows());
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        for (Eigen::Index j = 0; j < P.rows(); ++j)
            for (Eigen::Index v = 0; v < Z.cols(); ++v) out(i, j) += Z(i, v) * P(j, v);
    return out;
}

class KernelSizes : public ::testing::TestWithParam<int> {};

}  // namespace

TEST_P(KernelSizes, SerialMatchesLoops)
{
    const int V = GetParam();
    const Matrix Z = oracle::gaussian(5, V, 1);
    const Matrix P = oracle::gaussian(7, V, 2);
    EXPECT_LT(rel(kernels::serial::project(Z, P), naive_project(Z, P)), 1e-12);
    EXPECT_LT(rel(kernels::serial::gram(Z), naive_project(Z, Z)), 1e-12);
    const RowVector w = oracle::gaussian(1, V, 3).row(0);
    Matrix Zw = Z;
    for (Eigen::Index v = 0; v < V; ++v) Zw.col(v) *= w(v);
    EXPECT_LT(rel(kernels::serial::weighted_gram(Z, w), naive_project(Zw, Z)), 1e-12);
    Eigen::VectorXd rs = Eigen::VectorXd::Zero(5);
    for (int i = 0; i < 5; ++i)
        for (int v = 0; v < V; ++v) rs(i) += Z(i, v);
    EXPECT_LT(rel(kernels::serial::row_sums(Z), rs), 1e-12);
}

TEST_P(KernelSizes, ParallelMatchesSerial)
{
    const int V = GetParam();
    const Matrix Z = oracle::gaussian(6, V, 4);
    const Matrix P = oracle::gaussian(18, V, 5);
    const RowVector w = oracle::gaussian(1, V, 6).row(0);
    EXPECT_LT(rel(kernels::parallel::project(Z, P), kernels::serial::project(Z, P)), 1e-12);
    EXPECT_LT(rel(kernels::parallel::gram(Z), kernels::serial::gram(Z)), 1e-12);
    EXPECT_LT(rel(kernels::parallel::weighted_gram(Z, w), kernels::serial::weighted_gram(Z, w)), 1e-12);
    EXPECT_LT(rel(kernels::parallel::row_sums(Z), kernels::serial::row_sums(Z)), 1e-12);
}

TEST_P(KernelSizes, ParallelIsBitwiseStableAcrossThreadCounts)
{
    const int V = GetParam();
    const Matrix Z = oracle::gaussian(6, V, 7);
    const Matrix P = oracle::gaussian(9, V, 8);
    const RowVector w = oracle::gaussian(1, V, 9).row(0);
    const int saved = kernels::max_threads();
    kernels::set_threads(1);
    const Matrix p1 = kernels::parallel::project(Z, P);
    const Matrix g1 = kernels::parallel::weighted_gram(Z, w);
    const Vector r1 = kernels::parallel::row_sums(Z);
    for (int t : {2, 3, 4, 7}) {
        kernels::set_threads(t);
        EXPECT_TRUE(kernels::parallel::project(Z, P) == p1) << t << " threads";
        EXPECT_TRUE(kernels::parallel::weighted_gram(Z, w) == g1) << t << " threads";
        EXPECT_TRUE(kernels::parallel::row_sums(Z) == r1) << t << " threads";
    }
    kernels::set_threads(saved);
}

INSTANTIATE_TEST_SUITE_P(Voxels, KernelSizes, ::testing::Values(1, 3, 1023, 1024, 1025, 5000));
