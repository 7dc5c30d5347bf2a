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
 * @file kernels.cpp
 *
 *****************************************************************************/

#include "jpji/kernels.hpp"

#include <omp.h>

#include <vector>

namespace jpji::kernels {

namespace serial {

Matrix project(const Matrix& Z, const Matrix& P)
{
    if (Z.cols() != P.cols()) throw Error(ErrorKind::LengthMismatch, "project: column counts differ");
    Matrix out = Matrix::Zero(Z.rows(), P.rows());
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        for (Eigen::Index j = 0; j < P.rows(); ++j) {
            double s = 0.0;
            for (Eigen::Index v = 0; v < Z.cols(); ++v) s += Z(i, v) * P(j, v);
            out(i, j) = s;
        }
    return out;
}

Matrix weighted_gram(const Matrix& X, const RowVector& w)
{
    if (X.cols() != w.size()) throw Error(ErrorKind::LengthMismatch, "weighted_gram: length mismatch");
    Matrix out = Matrix::Zero(X.rows(), X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double s = 0.0;
            for (Eigen::Index v = 0; v < X.cols(); ++v) s += X(i, v) * X(j, v) * w(v);
            out(i, j) = s;
            out(j, i) = s;
        }
    return out;
}

Matrix gram(const Matrix& X)
{
    Matrix out = Matrix::Zero(X.rows(), X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double s = 0.0;
            for (Eigen::Index v = 0; v < X.cols(); ++v) s += X(i, v) * X(j, v);
            out(i, j) = s;
            out(j, i) = s;
        }
    return out;
}

Vector row_sums(const Matrix& X)
{
    Vector out = Vector::Zero(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index v = 0; v < X.cols(); ++v) out(i) += X(i, v);
    return out;
}

}  // namespace serial

namespace parallel {

namespace {

Eigen::Index n_blocks(Eigen::Index V)
{
    return (V + kBlock - 1) / kBlock;
}

template <class BlockFn>
Matrix blocked_reduce(Eigen::Index V, Eigen::Index rows, Eigen::Index cols, BlockFn fn)
{
    const Eigen::Index nb = n_blocks(V);
    if (nb <= 1) return V > 0 ? fn(0, V) : Matrix(Matrix::Zero(rows, cols));
    std::vector<Matrix> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index lo = b * kBlock;
        const Eigen::Index len = std::min(kBlock, V - lo);
        partial[static_cast<std::size_t>(b)] = fn(lo, len);
    }
    Matrix out = partial[0];
    for (Eigen::Index b = 1; b < nb; ++b) out += partial[static_cast<std::size_t>(b)];
    return out;
}

}  // namespace

Matrix project(const Matrix& Z, const Matrix& P)
{
    if (Z.cols() != P.cols()) throw Error(ErrorKind::LengthMismatch, "project: column counts differ");
    return blocked_reduce(Z.cols(), Z.rows(), P.rows(), [&](Eigen::Index lo, Eigen::Index len) {
        Matrix m = Z.middleCols(lo, len) * P.middleCols(lo, len).transpose();
        return m;
    });
}

Matrix weighted_gram(const Matrix& X, const RowVector& w)
{
    if (X.cols() != w.size()) throw Error(ErrorKind::LengthMismatch, "weighted_gram: length mismatch");
    return blocked_reduce(X.cols(), X.rows(), X.rows(), [&](Eigen::Index lo, Eigen::Index len) {
        Matrix xb = X.middleCols(lo, len);
        Matrix xw = xb * w.segment(lo, len).asDiagonal();
        Matrix m = xw * xb.transpose();
        return m;
    });
}

Matrix gram(const Matrix& X)
{
    return blocked_reduce(X.cols(), X.rows(), X.rows(), [&](Eigen::Index lo, Eigen::Index len) {
        Matrix m = Matrix::Zero(X.rows(), X.rows());
        m.selfadjointView<Eigen::Lower>().rankUpdate(X.middleCols(lo, len));
        m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
        return m;
    });
}

Vector row_sums(const Matrix& X)
{
    Matrix s = blocked_reduce(X.cols(), X.rows(), 1, [&](Eigen::Index lo, Eigen::Index len) {
        Matrix m = X.middleCols(lo, len).rowwise().sum();
        return m;
    });
    return s.col(0);
}

}  // namespace parallel

void set_threads(int n)
{
    if (n > 0) omp_set_num_threads(n);
}

int max_threads()
{
    return omp_get_max_threads();
}

}  // namespace jpji::kernels
