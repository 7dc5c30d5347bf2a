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
 * @file metrics.cpp
 *
 *****************************************************************************/

#include "jpji/metrics.hpp"

#include "jpji/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jpji {

std::vector<int> hungarian_max(const Eigen::MatrixXd& score)
{
    const int R = static_cast<int>(score.rows());
    const int Cc = static_cast<int>(score.cols());
    const int n = std::max(R, Cc);
    if (n == 0) return {};
    const double big = score.size() > 0 ? score.maxCoeff() : 0.0;
    // square cost matrix, padded with the neutral cost
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i + 1][j + 1] = (i < R && j < Cc) ? big - score(i, j) : big;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0][j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> out(static_cast<std::size_t>(R), -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] >= 1 && p[j] <= R && j <= Cc) out[p[j] - 1] = j - 1;
    return out;
}

Matching match_sources(const GroundTruth& truth, const Decomposition& est)
{
    const int K = est.n_subjects();
    if (truth.n_subjects() != K) throw Error(ErrorKind::LengthMismatch, "truth and estimate subject counts differ");
    Matching m;
    m.truth_index.resize(static_cast<std::size_t>(K));
    m.sign.resize(static_cast<std::size_t>(K));
    m.abs_corr.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const Matrix& Y = est.subjects[k].Y;
        const Matrix& S = truth.sources[k];
        if (Y.rows() != S.rows())
            m.warnings.push_back("CountMismatchWarning: subject " + std::to_string(k) + " has " +
                                 std::to_string(Y.rows()) + " estimated vs " + std::to_string(S.rows()) + " true sources");
        Eigen::MatrixXd corr(Y.rows(), S.rows());
        for (Eigen::Index i = 0; i < Y.rows(); ++i)
            for (Eigen::Index j = 0; j < S.rows(); ++j) corr(i, j) = correlation(Y.row(i), S.row(j));
        const std::vector<int> assign = hungarian_max(corr.cwiseAbs());
        for (Eigen::Index i = 0; i < Y.rows(); ++i) {
            const int t = assign[i];
            m.truth_index[k].push_back(t);
            m.sign[k].push_back(t >= 0 && corr(i, t) < 0 ? -1 : 1);
            m.abs_corr[k].push_back(t >= 0 ? std::abs(corr(i, t)) : 0.0);
        }
    }
    return m;
}

double jsir_from_correlation(double rho)
{
    if (!(rho > 0.0)) return -120.0;
    if (rho >= 1.0) return 120.0;
    const double db = 10.0 * std::log10(rho / (2.0 * (1.0 - rho)));
    return std::clamp(db, -120.0, 120.0);
}

JsirResult jsir(const GroundTruth& truth, const Decomposition& est, const Matching& matching)
{
    (void)truth;
    JsirResult r;
    const int K = est.n_subjects();
    for (int k = 0; k < K; ++k) {
        double s = 0.0;
        int n = 0;
        for (std::size_t c = 0; c < matching.abs_corr[k].size(); ++c) {
            if (matching.truth_index[k][c] < 0) continue;
            s += jsir_from_correlation(matching.abs_corr[k][c]);
            ++n;
        }
        r.per_subject.push_back(n > 0 ? s / n : -120.0);
    }
    double tot = 0.0;
    for (double v : r.per_subject) tot += v;
    r.overall = K > 0 ? tot / K : 0.0;
    return r;
}

bool counts_match(const GroundTruth& truth, const std::vector<std::vector<SourceLabel>>& labels, SourceKind kind)
{
    if (static_cast<int>(labels.size()) != truth.n_subjects()) return false;
    for (int k = 0; k < truth.n_subjects(); ++k) {
        const auto want = truth.counts(k)[static_cast<int>(kind)];
        const auto got = std::count_if(labels[k].begin(), labels[k].end(),
                                       [&](const SourceLabel& l) { return l.kind() == kind; });
        if (got != want) return false;
    }
    return true;
}

RunScore score_run(const GroundTruth& truth, const Decomposition& est, const Matching& matching)
{
    RunScore s;
    s.jsir_db = jsir(truth, est, matching).overall;
    for (int kind = 0; kind < 3; ++kind) s.counts_ok[kind] = counts_match(truth, est.labels, static_cast<SourceKind>(kind));
    for (int k = 0; k < est.n_subjects(); ++k) {
        const auto& lab = k < static_cast<int>(est.labels.size()) ? est.labels[k] : std::vector<SourceLabel>{};
        for (std::size_t c = 0; c < matching.truth_index[k].size(); ++c) {
            ++s.peer_total;
            const int t = matching.truth_index[k][c];
            if (t < 0 || c >= lab.size()) continue;
            if (lab[c].peers() == truth.labels[k][t].peers()) ++s.peer_hits;
        }
    }
    return s;
}

std::array<double, 3> acc_c(const std::vector<RunScore>& runs)
{
    std::array<double, 3> out{0.0, 0.0, 0.0};
    if (runs.empty()) return out;
    for (const auto& r : runs)
        for (int i = 0; i < 3; ++i) out[i] += r.counts_ok[i] ? 1.0 : 0.0;
    for (double& v : out) v = 100.0 * v / static_cast<double>(runs.size());
    return out;
}

double acc_k(const std::vector<RunScore>& runs)
{
    long hits = 0, total = 0;
    for (const auto& r : runs) {
        hits += r.peer_hits;
        total += r.peer_total;
    }
    return total > 0 ? 100.0 * static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

}  // namespace jpji
