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
 * @file simgen.cpp
 *
 *****************************************************************************/

#include "jpji/simgen.hpp"

#include "jpji/numerics.hpp"
#include "jpji/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace jpji {

namespace {

int grid_side(int V)
{
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(V))));
    return s * s == V ? s : 0;
}

RowVector render(int V, const BlobParams& p, Rng& rng)
{
    const int side = grid_side(V);
    const int cs = p.cell_size;
    const int per_row = side > 0 ? side / cs : 0;
    const int n = std::max(1, p.n_blobs);
    std::vector<double> sig(static_cast<std::size_t>(n));
    for (auto& s : sig) s = rng.uniform(p.sigma_min, p.sigma_max);
    std::vector<double> amp(static_cast<std::size_t>(n), 1.0);
    if (p.zero_mass && n >= 2) {
        // 2-D blob mass scales with sigma^2, 1-D with sigma
        const double dim = side > 0 ? 2.0 : 1.0;
        double pos = 0.0;
        for (int i = 0; i < n - 1; ++i) pos += std::pow(sig[i], dim);
        amp[n - 1] = -pos / std::pow(sig[n - 1], dim);
    }
    RowVector m = RowVector::Zero(V);
    for (int b = 0; b < n; ++b) {
        const int cell = b < static_cast<int>(p.cells.size()) ? p.cells[b] : -1;
        if (side > 0) {
            double cx, cy;
            if (cell >= 0 && per_row > 0) {
                cx = (cell % per_row) * cs + rng.uniform(2.0, cs - 2.0);
                cy = (cell / per_row) * cs + rng.uniform(2.0, cs - 2.0);
            } else {
                cx = rng.uniform(0.0, side);
                cy = rng.uniform(0.0, side);
            }
            const double s2 = 2.0 * sig[b] * sig[b];
            for (int y = 0; y < side; ++y)
                for (int x = 0; x < side; ++x)
                    m(y * side + x) += amp[b] * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / s2);
        } else {
            const double c = cell >= 0 ? cell * cs + rng.uniform(2.0, cs - 2.0) : rng.uniform(0.0, V);
            const double s2 = 2.0 * sig[b] * sig[b];
            for (int v = 0; v < V; ++v) m(v) += amp[b] * std::exp(-(v - c) * (v - c) / s2);
        }
    }
    for (int v = 0; v < V; ++v) m(v) += p.background * rng.normal();
    return standardize(m);
}

}  // namespace

void ScenarioSpec::validate() const
{
    auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidSpec, m); };
    if (K < 1) bad("K must be >= 1");
    if (V < 16) bad("V must be >= 16");
    if (C1 < 0 || C2 < 0 || C3 < 0) bad("source counts must be >= 0");
    if (C1_range && (C1_range->first < 0 || C1_range->first > C1_range->second)) bad("invalid C1 range");
    if (C2_range && (C2_range->first < 0 || C2_range->first > C2_range->second)) bad("invalid C2 range");
    const int c1max = C1_range ? C1_range->second : C1;
    const int c2max = C2_range ? C2_range->second : C2;
    if (c1max + c2max + C3 < 1) bad("every subject needs at least one source");
    if (N < c1max + c2max + C3 + 1) bad("N must exceed the per-subject source count");
    if (!partition.empty() && static_cast<int>(partition.size()) != K) bad("partition needs one entry per subject");
    if (partition.empty() && (clusters < 1 || clusters > K)) bad("clusters must lie in [1, K]");
    if (c2max > 0) {
        const auto memb = cluster_of();
        const int ncl = *std::max_element(memb.begin(), memb.end()) + 1;
        for (int g = 0; g < ncl; ++g) {
            const auto size = std::count(memb.begin(), memb.end(), g);
            if (size > 0 && size < 5)
                bad("cluster " + std::to_string(g) + " has " + std::to_string(size) +
                    " subjects; partially-joint sources need clusters of at least 5");
        }
    }
}

std::vector<int> ScenarioSpec::cluster_of() const
{
    if (!partition.empty()) return partition;
    std::vector<int> m(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) m[k] = k * clusters / K;
    return m;
}

RowVector generate_spatial_source(int V, const BlobParams& params, std::uint64_t seed)
{
    Rng rng(seed);
    return render(V, params, rng);
}

Matrix generate_mixing(int N, int C, std::uint64_t seed)
{
    Rng rng(seed);
    constexpr int half = 9;
    std::vector<double> kern(2 * half + 1);
    for (int t = -half; t <= half; ++t) kern[t + half] = std::exp(-0.5 * (t / 3.0) * (t / 3.0));
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix A(N, C);
        for (int j = 0; j < C; ++j) {
            std::vector<double> w(static_cast<std::size_t>(N));
            for (auto& x : w) x = rng.normal();
            RowVector col(N);
            for (int i = 0; i < N; ++i) {
                double s = 0.0;
                for (int t = -half; t <= half; ++t) {
                    const int src = i - t;
                    if (src >= 0 && src < N) s += w[src] * kern[t + half];
                }
                col(i) = s;
            }
            A.col(j) = standardize(col).transpose();
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) > 0.0 && sv(0) / sv(sv.size() - 1) < 1e3) return A;
    }
    throw Error(ErrorKind::RankDeficientMixing, "could not draw a well-conditioned mixing matrix");
}

Matrix add_noise(const Matrix& O, double snr_db, std::uint64_t seed)
{
    if (!O.allFinite()) throw Error(ErrorKind::NonFiniteData, "observations contain non-finite values");
    if (std::isinf(snr_db) && snr_db > 0) return O;
    const double power = O.squaredNorm() / static_cast<double>(O.size());
    const double sd = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    Rng rng(seed);
    Matrix out = O;
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) += sd * rng.normal();
    return out;
}

SimulatedData generate_dataset(const ScenarioSpec& spec)
{
    spec.validate();
    Rng scen(split_seed(spec.seed, {tag::scenario}));
    SimulatedData out;
    out.C1 = spec.C1_range ? spec.C1_range->first + static_cast<int>(scen.below(static_cast<std::uint64_t>(
                                                       spec.C1_range->second - spec.C1_range->first + 1)))
                           : spec.C1;
    out.C2 = spec.C2_range ? spec.C2_range->first + static_cast<int>(scen.below(static_cast<std::uint64_t>(
                                                       spec.C2_range->second - spec.C2_range->first + 1)))
                           : spec.C2;
    if (out.C1 + out.C2 + spec.C3 < 1) out.C1 = 1;

    const int K = spec.K;
    const int V = spec.V;
    const std::vector<int> memb = spec.cluster_of();
    const int ncl = *std::max_element(memb.begin(), memb.end()) + 1;

    Rng maps(split_seed(spec.seed, {tag::maps}));
    const int side = grid_side(V);
    const int cell_size = 8;
    const int ncell = side > 0 ? (side / cell_size) * (side / cell_size) : V / cell_size;
    std::vector<int> pool(static_cast<std::size_t>(std::max(ncell, 0)));
    for (int i = 0; i < ncell; ++i) pool[i] = i;
    maps.shuffle(pool);

    auto next_map = [&]() {
        BlobParams p;
        p.cell_size = cell_size;
        for (int b = 0; b < p.n_blobs; ++b) {
            if (pool.empty()) {
                p.cells.push_back(-1);
            } else {
                p.cells.push_back(pool.back());
                pool.pop_back();
            }
        }
        return render(V, p, maps);
    };

    int next_id = 0;
    std::vector<RowVector> J;
    std::vector<int> J_id;
    for (int i = 0; i < out.C1; ++i) {
        J.push_back(next_map());
        J_id.push_back(next_id++);
    }
    std::vector<std::vector<RowVector>> P(static_cast<std::size_t>(ncl));
    std::vector<std::vector<int>> P_id(static_cast<std::size_t>(ncl));
    for (int g = 0; g < ncl; ++g)
        for (int i = 0; i < out.C2; ++i) {
            P[g].push_back(next_map());
            P_id[g].push_back(next_id++);
        }

    GroundTruth& t = out.truth;
    t.joint_count = out.C1;
    t.cluster_of = memb;
    t.sources.resize(static_cast<std::size_t>(K));
    t.mixing.resize(static_cast<std::size_t>(K));
    t.labels.resize(static_cast<std::size_t>(K));
    t.map_ids.resize(static_cast<std::size_t>(K));
    t.pjoint_counts.assign(static_cast<std::size_t>(K), out.C2);
    t.individual_counts.assign(static_cast<std::size_t>(K), spec.C3);

    for (int k = 0; k < K; ++k) {
        const int C = out.C1 + out.C2 + spec.C3;
        Matrix S(C, V);
        int r = 0;
        std::vector<int> mates;
        for (int j = 0; j < K; ++j)
            if (j != k && memb[j] == memb[k]) mates.push_back(j);
        for (int i = 0; i < out.C1; ++i, ++r) {
            S.row(r) = J[i];
            t.map_ids[k].push_back(J_id[i]);
            t.labels[k].push_back(K > 1 ? SourceLabel::joint(K, k) : SourceLabel::individual());
        }
        for (int i = 0; i < out.C2; ++i, ++r) {
            S.row(r) = P[memb[k]][i];
            t.map_ids[k].push_back(P_id[memb[k]][i]);
            SourceLabel l;
            if (mates.empty())
                l = SourceLabel::individual();
            else if (static_cast<int>(mates.size()) == K - 1)
                l = SourceLabel::joint(K, k);
            else
                l = SourceLabel::make(SourceKind::PartiallyJoint, mates, K, k);
            t.labels[k].push_back(l);
        }
        for (int i = 0; i < spec.C3; ++i, ++r) {
            S.row(r) = next_map();
            t.map_ids[k].push_back(next_id++);
            t.labels[k].push_back(SourceLabel::individual());
        }
        t.sources[k] = std::move(S);
    }

    out.datasets.resize(static_cast<std::size_t>(K));
    std::vector<std::string> errors(static_cast<std::size_t>(K));
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < K; ++k) {
        try {
            const int C = static_cast<int>(t.sources[k].rows());
            t.mixing[k] = generate_mixing(spec.N, C, split_seed(spec.seed, {tag::mixing, static_cast<std::uint64_t>(k)}));
            Matrix O = t.mixing[k] * t.sources[k];
            if (spec.snr_db) O = add_noise(O, *spec.snr_db, split_seed(spec.seed, {tag::noise, static_cast<std::uint64_t>(k)}));
            char id[32];
            std::snprintf(id, sizeof id, "sub-%02d", k + 1);
            out.datasets[k].id = id;
            out.datasets[k].observations = std::move(O);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error(ErrorKind::RankDeficientMixing, e);
    return out;
}

}  // namespace jpji
