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
 * @file jpji.hpp Cost matrix, inner fixed-point extraction, deflation and
 * the outer sweep engine.
 *
 *****************************************************************************/

#pragma once

#include "jpji/numerics.hpp"
#include "jpji/rng.hpp"
#include "jpji/types.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace jpji {

/// Random order of the other subjects; alpha-th partner tuple is
/// (order[alpha], order[alpha+1], order[alpha+2]) with wrap-around.
struct PeerOrder {
    std::vector<int> order;

    int n() const { return static_cast<int>(order.size()); }
    static PeerOrder random(const std::vector<int>& candidates, Rng& rng);
};

struct CostMatrix {
    Matrix M;
    std::array<double, 3> weights{0.5, 0.75, 1.0};
    std::vector<std::array<Vector, 3>> cumulants;  // [alpha][eta-2]

    int n_alpha() const { return static_cast<int>(cumulants.size()); }
    /// w_eta * ||C_(alpha,eta)||^2
    double contribution(int alpha, int eta) const;
    /// w_eta * (u . C_(alpha,eta))^2
    double contribution_at(const Vector& u, int alpha, int eta) const;
};

/// partners lists y^(c, K~(1)) ... y^(c, K~(n)) in peer order. A single
/// entry equal to the subject's own row gives the individual mode.
CostMatrix build_cost_matrix(const Matrix& Zk, const PartnerRows& partners, const std::array<double, 3>& weights,
                             CostEstimator estimator = CostEstimator::SampleCumulant);

/// Collects rows y^(c,j) of current_Y in peer order.
CostMatrix build_cost_matrix(int k, int c, const Matrix& Zk, const std::vector<Matrix>& current_Y,
                             const PeerOrder& peers, const std::array<double, 3>& weights);

double cost(const Vector& u, const CostMatrix& M);

struct InnerOptions {
    std::array<double, 3> weights{0.5, 0.75, 1.0};
    double eps0 = 1e-6;
    int cap = 200;
    CostEstimator estimator = CostEstimator::SampleCumulant;
    bool single_alpha = false;  // only the first partner tuple (baseline cost)
};

/// Keeps only the alpha = 1 term of a cost matrix.
CostMatrix first_alpha(const CostMatrix& M);

struct InnerResult {
    Vector u;
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
    double lambda = 0.0;
    ExtractMode mode = ExtractMode::Peer;
};

/// Fixed point u <- dominant_eigenvector(M(u)). With partners the matrix is
/// fixed (peer mode); with no partners the subject's own source u.Zk is the
/// partner (self mode) and M is rebuilt every iteration.
InnerResult inner_extract(const Matrix& Zk, const PartnerRows& partners, const Vector& u0, const InnerOptions& options);

/// Regresses y out of every row of Z.
Matrix deflate(const Matrix& Z, const RowVector& y);

namespace detail {

struct SlotContext {
    int sweep = 0;  // 1-based
    int pass = 0;
    int subject = 0;
    int slot = 0;
    const Matrix* Zw = nullptr;
    const std::vector<std::vector<RowVector>>* Y = nullptr;  // [k][c] current standardized sources
    std::vector<int> candidates;               // other subjects holding this slot
    Vector u_prev;                             // empty on first visit
};

struct SlotOutcome {
    Vector u;
    double cost = 0.0;
    std::vector<InnerTrace> traces;
    SourceKind decision = SourceKind::Joint;
};

using SlotExtractor = std::function<SlotOutcome(const SlotContext&)>;

struct EngineResult {
    Decomposition decomposition;
    std::vector<std::vector<SourceKind>> decisions;  // [k][c], final sweep
};

EngineResult run_engine(const std::vector<std::string>& ids, const std::vector<PreprocessedSubject>& pre,
                        const AlgoConfig& config, const SlotExtractor& extract);

/// Sorts slots by descending mean cost, ties by subject-0 kurtosis.
std::vector<int> slot_order(const std::vector<std::vector<double>>& cost, const std::vector<Matrix>& Y);

}  // namespace detail

/// Preprocesses every subject under the configured component policy.
std::vector<PreprocessedSubject> preprocess_all(const std::vector<SubjectDataset>& datasets, const AlgoConfig& config,
                                                std::vector<std::string>* warnings = nullptr);

/// Engine plus (if config.classify) feature typing on already preprocessed
/// subjects.
Decomposition run_jpji_ica(const std::vector<std::string>& ids, const std::vector<PreprocessedSubject>& pre,
                           const AlgoConfig& config);

Decomposition run_jpji_ica(const std::vector<SubjectDataset>& datasets, const AlgoConfig& config);

/// Decomposition restricted to a recorded outer sweep (needs
/// record_snapshots); typing is recomputed when config.classify is set.
Decomposition decomposition_at_sweep(const Decomposition& dec, int sweep, const AlgoConfig& config);

}  // namespace jpji
