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
 * @file preprocess.hpp PCA reduction, BIC model-order selection and
 * whitening.
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

#include <string>
#include <vector>

namespace jpji {

/// Eigenvalues of the N x N time covariance over voxels, descending.
Vector time_covariance_spectrum(const SubjectDataset& O);

/// BIC(c) = -2 logL(c) + p(c) log V under probabilistic PCA, with
/// p(c) = N c - c (c - 1) / 2 + 1.
double ppca_bic(const Vector& eigenvalues, int c, int n_voxels);

/// argmin of BIC over 1..c_max. When fewer than c_max eigenvalues are
/// positive the positive rank is returned and a warning is appended.
int estimate_order_bic(const SubjectDataset& O, int c_max, std::vector<std::string>* warnings = nullptr);

int default_c_max(int n_time);

struct PcaResult {
    Matrix scores;    // C x V
    Matrix loadings;  // C x N
    Vector mean;      // length N
    double retained_variance = 0.0;
};

PcaResult pca_reduce(const SubjectDataset& O, int C);

/// Z = R^(-1/2) (X - rowmeans). W_total is R^(-1/2).
PreprocessedSubject whiten(const Matrix& X);

/// pca_reduce followed by whiten, with W_total composed to map centered
/// observations to Z.
PreprocessedSubject preprocess_subject(const SubjectDataset& O, int C);

/// Component count per subject under the configured policy.
std::vector<int> select_orders(const std::vector<SubjectDataset>& datasets, const AlgoConfig& config,
                               std::vector<std::string>* warnings = nullptr);

/// select_orders plus preprocess_subject, computing each spectrum once.
std::vector<PreprocessedSubject> preprocess_datasets(const std::vector<SubjectDataset>& datasets,
                                                     const AlgoConfig& config,
                                                     std::vector<std::string>* warnings = nullptr);

}  // namespace jpji
