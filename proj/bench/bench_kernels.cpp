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
 * @file bench_kernels.cpp Serial reference vs OpenMP voxel kernels.
 *
 *****************************************************************************/

#include "jpji/kernels.hpp"
#include "jpji/numerics.hpp"

#include <benchmark/benchmark.h>

using namespace jpji;

namespace {

Matrix data(Eigen::Index rows, Eigen::Index V)
{
    return Matrix::Random(rows, V);
}

// args: voxels, rows
void voxel_args(benchmark::internal::Benchmark* b)
{
    for (int V : {4096, 65536, 262144})
        for (int C : {8, 32}) b->Args({V, C});
}

template <Matrix (*F)(const Matrix&)>
void BM_Gram(benchmark::State& st)
{
    const Matrix X = data(st.range(1), st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(F(X));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Matrix (*F)(const Matrix&, const RowVector&)>
void BM_WeightedGram(benchmark::State& st)
{
    const Matrix X = data(st.range(1), st.range(0));
    const RowVector w = RowVector::Random(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(F(X, w));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Matrix (*F)(const Matrix&, const Matrix&)>
void BM_Project(benchmark::State& st)
{
    const Matrix Z = data(st.range(1), st.range(0));
    const Matrix P = data(3, st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(F(Z, P));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_CumulantVector4(benchmark::State& st)
{
    const Matrix Z = data(st.range(1), st.range(0));
    const Matrix P = data(3, st.range(0));
    const RowVector a = P.row(0), b = P.row(1), c = P.row(2);
    for (auto _ : st) benchmark::DoNotOptimize(cumulant_vector(Z, {&a, &b, &c}, 4));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_Gram<kernels::serial::gram>)->Name("gram/serial")->Apply(voxel_args);
BENCHMARK(BM_Gram<kernels::parallel::gram>)->Name("gram/parallel")->Apply(voxel_args);
BENCHMARK(BM_WeightedGram<kernels::serial::weighted_gram>)->Name("weighted_gram/serial")->Apply(voxel_args);
BENCHMARK(BM_WeightedGram<kernels::parallel::weighted_gram>)->Name("weighted_gram/parallel")->Apply(voxel_args);
BENCHMARK(BM_Project<kernels::serial::project>)->Name("project/serial")->Apply(voxel_args);
BENCHMARK(BM_Project<kernels::parallel::project>)->Name("project/parallel")->Apply(voxel_args);
BENCHMARK(BM_CumulantVector4)->Name("cumulant_vector4/parallel")->Apply(voxel_args);

BENCHMARK_MAIN();
