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
 * @file oracles.hpp Independent reference implementations used by the tests.
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using jpji::Matrix;
using jpji::RowVector;
using jpji::Vector;

/// Gaussian matrix from std::mt19937_64, independent of the library RNG.
inline Matrix gaussian(int rows, int cols, unsigned seed)
{
    std::mt19937_64 g(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = n(g);
    return M;
}

/// Laplace-distributed rows (super-Gaussian), unit scale.
inline Matrix laplace(int rows, int cols, unsigned seed)
{
    std::mt19937_64 g(seed);
    std::exponential_distribution<double> e(1.0);
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = e(g) - e(g);
    return M;
}

inline long double raw_moment(const std::vector<RowVector>& xs, const std::vector<int>& idx)
{
    const Eigen::Index V = xs.front().size();
    long double s = 0.0L;
    for (Eigen::Index v = 0; v < V; ++v) {
        long double p = 1.0L;
        for (int i : idx) p *= static_cast<long double>(xs[static_cast<std::size_t>(i)](v));
        s += p;
    }
    return s / static_cast<long double>(V);
}

/// Joint cumulant from raw moments through the set-partition (Leonov-Shiryaev)
/// formula: sum over partitions of (-1)^(b-1) (b-1)! prod_B E[prod_B x].
inline double partition_cumulant(const std::vector<RowVector>& xs)
{
    const int n = static_cast<int>(xs.size());
    std::vector<std::vector<int>> blocks;
    long double total = 0.0L;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            const int b = static_cast<int>(blocks.size());
            long double term = 1.0L;
            for (int f = 2; f < b; ++f) term *= f;
            if ((b - 1) % 2) term = -term;
            for (const auto& B : blocks) term *= raw_moment(xs, B);
            total += term;
            return;
        }
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            blocks[j].push_back(i);
            rec(i + 1);
            blocks[j].pop_back();
        }
        blocks.push_back({i});
        rec(i + 1);
        blocks.pop_back();
    };
    rec(0);
    return static_cast<double>(total);
}

/// Largest algebraic eigenpair by shifted power iteration.
inline std::pair<Vector, double> power_iteration(const Matrix& M, int iters = 200000)
{
    const Eigen::Index n = M.rows();
    const double shift = M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    Matrix S = M + shift * Matrix::Identity(n, n);
    Vector u = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) u(i) += 1e-3 * static_cast<double>(i + 1);
    u.normalize();
    for (int it = 0; it < iters; ++it) {
        Vector w = S * u;
        w.normalize();
        const double d = (w - u).norm();
        u = w;
        if (d < 1e-15) break;
    }
    return {u, u.dot(M * u)};
}

inline Matrix covariance_loops(const Matrix& X)
{
    const Eigen::Index C = X.rows(), V = X.cols();
    std::vector<double> mean(static_cast<std::size_t>(C), 0.0);
    for (Eigen::Index i = 0; i < C; ++i) {
        for (Eigen::Index v = 0; v < V; ++v) mean[i] += X(i, v);
        mean[i] /= static_cast<double>(V);
    }
    Matrix R(C, C);
    for (Eigen::Index i = 0; i < C; ++i)
        for (Eigen::Index j = 0; j < C; ++j) {
            long double s = 0.0L;
            for (Eigen::Index v = 0; v < V; ++v) s += (X(i, v) - mean[i]) * (X(j, v) - mean[j]);
            R(i, j) = static_cast<double>(s / static_cast<long double>(V));
        }
    return R;
}

/// Regularized incomplete beta I_x(a, b) by the modified Lentz continued fraction.
inline double incomplete_beta(double x, double a, double b)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(1.0 - x, b, a);
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - lbeta) / a;
    const double tiny = 1e-300;
    double f = 1.0, c = 1.0, d = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const int m = i / 2;
        double num;
        if (i == 0)
            num = 1.0;
        else if (i % 2 == 0)
            num = (m * (b - m) * x) / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        else
            num = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        const double cd = c * d;
        f *= cd;
        if (std::abs(1.0 - cd) < 1e-16) break;
    }
    return front * (f - 1.0);
}

inline double t_two_sided(double t, double df)
{
    return incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
}

/// Best assignment of rows to distinct columns by trying every permutation.
inline double best_assignment_value(const Eigen::MatrixXd& S)
{
    const int r = static_cast<int>(S.rows()), c = static_cast<int>(S.cols());
    std::vector<int> cols(static_cast<std::size_t>(std::max(r, c)));
    std::iota(cols.begin(), cols.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        double v = 0.0;
        for (int i = 0; i < r; ++i)
            if (cols[i] < c) v += S(i, cols[i]);
        best = std::max(best, v);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

/// Minimum k-means inertia over every assignment of points to k non-empty clusters.
inline double exhaustive_kmeans_inertia(const std::vector<Vector>& pts, int k)
{
    const int n = static_cast<int>(pts.size());
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<int> cnt(static_cast<std::size_t>(k), 0);
        for (int x : a) cnt[x]++;
        if (std::all_of(cnt.begin(), cnt.end(), [](int v) { return v > 0; })) {
            double inertia = 0.0;
            for (int g = 0; g < k; ++g) {
                Vector m = Vector::Zero(pts[0].size());
                for (int i = 0; i < n; ++i)
                    if (a[i] == g) m += pts[i];
                m /= cnt[g];
                for (int i = 0; i < n; ++i)
                    if (a[i] == g) inertia += (pts[i] - m).squaredNorm();
            }
            best = std::min(best, inertia);
        }
        int i = 0;
        while (i < n && ++a[i] == k) a[i++] = 0;
        if (i == n) break;
    }
    return best;
}

/// Benjamini-Hochberg by direct search for the largest passing rank.
inline std::vector<bool> bh_naive(const std::vector<double>& p, double q)
{
    const int m = static_cast<int>(p.size());
    int kmax = 0;
    for (int k = 1; k <= m; ++k) {
        int below = 0;
        for (double v : p) below += v <= q * k / m;
        if (below >= k) kmax = k;
    }
    double cut = -1.0;
    if (kmax > 0) {
        std::vector<double> s = p;
        std::sort(s.begin(), s.end());
        cut = s[kmax - 1];
    }
    std::vector<bool> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = kmax > 0 && p[i] <= cut;
    return out;
}

}  // namespace oracle
