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
 * @file numerics.hpp Cumulant estimators, symmetric eigen-solving,
 * whitening primitives, k-means and voxelwise statistics.
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

#include <cstdint>
#include <vector>

namespace jpji {

/// Sample joint cumulant of order 2, 3 or 4 of the given series (averaged
/// over samples, each series re-centered first).
double cross_cumulant(int order, const std::vector<RowVector>& series);

struct CumulantVector {
    Vector values;
    int order = 2;
};

using PartnerRows = std::vector<const RowVector*>;

/// Element i is cross_cumulant(order, row_i(Z), partners...). One blocked
/// pass over the voxels for all rows.
CumulantVector cumulant_vector(const Matrix& Z, const PartnerRows& partners, int order);

struct EigenPair {
    Vector u;
    double lambda = 0.0;
};

/// Largest eigenpair of a symmetric matrix. Largest-magnitude entry of u is
/// positive; a repeated top eigenvalue resolves to the projection of the
/// lowest-index basis vector onto the top eigenspace.
EigenPair dominant_eigenvector(const Matrix& M);

/// (1/V) (X - mean)(X - mean)^T.
Matrix covariance(const Matrix& X);

/// Eigenvalues below rank_tol * lambda_max count as zero.
inline constexpr double kRankTolerance = 1e-12;

Matrix inverse_sqrt_psd(const Matrix& R);

struct KMeansResult {
    std::vector<int> assignment;
    std::vector<Vector> centroids;
    double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding, best of restarts by inertia.
KMeansResult kmeans(const std::vector<Vector>& points, int k, std::uint64_t seed, int restarts = 20);

/// Mean silhouette coefficient (Euclidean). Singletons score 0.
double silhouette(const std::vector<Vector>& points, const std::vector<int>& assignment);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

/// Welch two-sample t-test, two-sided.
TTestResult two_sample_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// P(|T| > |t|) for Student t with df degrees of freedom.
double student_t_two_sided(double t, double df);

/// Benjamini-Hochberg step-up at level q.
std::vector<bool> bh_fdr(const std::vector<double>& pvalues, double q);

double excess_kurtosis(const RowVector& x);
double correlation(const RowVector& a, const RowVector& b);

/// Zero mean, unit variance copy.
RowVector standardize(const RowVector& x);

}  // namespace jpji
