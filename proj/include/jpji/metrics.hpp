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
 * @file metrics.hpp Truth-to-estimate matching, jSIR, Acc(C), Acc(K~).
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace jpji {

/// Maximum-weight assignment of rows to columns (rows <= cols after
/// transposition is handled internally). result[r] is the column of row r,
/// or -1 when unassigned.
std::vector<int> hungarian_max(const Eigen::MatrixXd& score);

struct Matching {
    std::vector<std::vector<int>> truth_index;  // [k][estimated slot] -> truth row, -1 if none
    std::vector<std::vector<int>> sign;         // +1 / -1
    std::vector<std::vector<double>> abs_corr;
    std::vector<std::string> warnings;
};

Matching match_sources(const GroundTruth& truth, const Decomposition& est);

/// 10 log10(rho / (2 (1 - rho))), clamped to [-120, 120] dB.
double jsir_from_correlation(double rho);

struct JsirResult {
    double overall = 0.0;
    std::vector<double> per_subject;
};

JsirResult jsir(const GroundTruth& truth, const Decomposition& est, const Matching& matching);

struct RunScore {
    double jsir_db = 0.0;
    std::array<bool, 3> counts_ok{false, false, false};  // joint, partially-joint, individual
    int peer_hits = 0;
    int peer_total = 0;
};

RunScore score_run(const GroundTruth& truth, const Decomposition& est, const Matching& matching);

/// True when every subject's estimated count of 'kind' equals the truth.
bool counts_match(const GroundTruth& truth, const std::vector<std::vector<SourceLabel>>& labels, SourceKind kind);

/// Percentage of runs with exact counts, per kind.
std::array<double, 3> acc_c(const std::vector<RunScore>& runs);

/// Exact peer-set matches over all (run, subject, slot), in percent.
double acc_k(const std::vector<RunScore>& runs);

}  // namespace jpji
