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
 * @file kernels.hpp Voxel-loop reductions. The serial namespace holds the
 * plain reference loops; the parallel namespace splits the voxel axis into
 * fixed blocks of kBlock columns, reduces each block independently and sums
 * the partial results in block order, so output does not depend on the
 * number of OpenMP threads.
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

namespace jpji::kernels {

inline constexpr Eigen::Index kBlock = 1024;

namespace serial {
/// Z * P^T for Z (C x V) and P (m x V).
Matrix project(const Matrix& Z, const Matrix& P);
/// X * diag(w) * X^T.
Matrix weighted_gram(const Matrix& X, const RowVector& w);
/// X * X^T.
Matrix gram(const Matrix& X);
Vector row_sums(const Matrix& X);
}  // namespace serial

namespace parallel {
Matrix project(const Matrix& Z, const Matrix& P);
Matrix weighted_gram(const Matrix& X, const RowVector& w);
Matrix gram(const Matrix& X);
Vector row_sums(const Matrix& X);
}  // namespace parallel

using parallel::gram;
using parallel::project;
using parallel::row_sums;
using parallel::weighted_gram;

/// Sets the OpenMP worker count (<= 0 leaves the runtime default).
void set_threads(int n);
int max_threads();

}  // namespace jpji::kernels
