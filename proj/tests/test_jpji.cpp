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
 * @file test_jpji.cpp
 *
 *****************************************************************************/

#include "jpji/jpji.hpp"
#include "jpji/kernels.hpp"
#include "jpji/metrics.hpp"
#include "jpji/preprocess.hpp"
#include "jpji/simgen.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace jpji;

namespace {

template <class F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no jpji::Error thrown";
    return ErrorKind::Io;
}

constexpr std::array<double, 3> kW{0.5, 0.75, 1.0};

struct Fixture {
    Matrix Z;
    std::vector<RowVector> partners;
    PartnerRows ptr;
};

Fixture make(int C, int V, int n, unsigned seed)
{
    Fixture f;
    f.Z = oracle::laplace(C, V, seed);
    const Matrix P = oracle::laplace(n, V, seed + 1) + 0.5 * oracle::gaussian(n, V, seed + 2);
    for (int j = 0; j < n; ++j) f.partners.push_back(P.row(j));
    for (const auto& r : f.partners) f.ptr.push_back(&r);
    return f;
}

/// sum over alpha and eta of w * c c^T with c from the partition formula.
Matrix brute_cost(const Fixture& f, const std::array<double, 3>& w, int only_alpha = -1)
{
    const int C = static_cast<int>(f.Z.rows());
    const int n = static_cast<int>(f.partners.size());
    Matrix M = Matrix::Zero(C, C);
    for (int a = 0; a < n; ++a) {
        if (only_alpha >= 0 && a != only_alpha) continue;
        for (int eta = 2; eta <= 4; ++eta) {
            Vector c(C);
            for (int i = 0; i < C; ++i) {
                std::vector<RowVector> xs{f.Z.row(i)};
                for (int m = 0; m < eta - 1; ++m) xs.push_back(f.partners[static_cast<std::size_t>((a + m) % n)]);
                c(i) = oracle::partition_cumulant(xs);
            }
            M += w[eta - 2] * c * c.transpose();
        }
    }
    return M;
}

bool nondecreasing(const std::vector<double>& t, double tol)
{
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] < t[i - 1] - tol) return false;
    return true;
}

}  // namespace

TEST(CostMatrix, MatchesBruteForceCumulants)
{
    for (int n = 1; n <= 5; ++n) {
        const Fixture f = make(4, 80, n, 10 * n);
        const CostMatrix M = build_cost_matrix(f.Z, f.ptr, kW);
        const Matrix B = brute_cost(f, kW);
        EXPECT_LT((M.M - B).norm(), 1e-10 * B.norm()) << "n=" << n;
        EXPECT_EQ(M.n_alpha(), n);
        EXPECT_LT((M.M - M.M.transpose()).norm(), 1e-15 * M.M.norm());
    }
}

TEST(CostMatrix, ContributionsSumToQuadraticForm)
{
    const Fixture f = make(5, 100, 4, 3);
    const CostMatrix M = build_cost_matrix(f.Z, f.ptr, kW);
    const Vector u = oracle::gaussian(5, 1, 4).col(0).normalized();
    double at = 0.0, total = 0.0;
    for (int a = 0; a < M.n_alpha(); ++a)
        for (int eta = 2; eta <= 4; ++eta) {
            at += M.contribution_at(u, a, eta);
            total += M.contribution(a, eta);
        }
    EXPECT_NEAR(at, cost(u, M), 1e-12 * std::abs(at));
    EXPECT_NEAR(total, M.M.trace(), 1e-12 * total);
}

TEST(CostMatrix, PerVoxelEstimatorDefinition)
{
    const Fixture f = make(3, 60, 3, 7);
    const CostMatrix M = build_cost_matrix(f.Z, f.ptr, kW, CostEstimator::PerVoxel);
    const int V = 60, n = 3;
    std::vector<RowVector> A;
    for (const auto& p : f.partners) A.push_back(p.array() - p.mean());
    const Vector zbar = f.Z.rowwise().mean();
    Matrix B = Matrix::Zero(3, 3);
    for (int v = 0; v < V; ++v) {
        double q = 0.0;
        for (int a = 0; a < n; ++a) {
            const double p1 = A[a](v), p2 = p1 * A[(a + 1) % n](v), p3 = p2 * A[(a + 2) % n](v);
            q += kW[0] * p1 * p1 + kW[1] * p2 * p2 + kW[2] * p3 * p3;
        }
        const Vector z = f.Z.col(v) - zbar;
        B += q * z * z.transpose();
    }
    B /= V;
    EXPECT_LT((M.M - B).norm(), 1e-10 * B.norm());
}

TEST(CostMatrix, FirstAlphaKeepsOneTuple)
{
    const Fixture f = make(4, 90, 5, 21);
    const CostMatrix M = first_alpha(build_cost_matrix(f.Z, f.ptr, kW));
    const Matrix B = brute_cost(f, kW, 0);
    EXPECT_EQ(M.n_alpha(), 1);
    EXPECT_LT((M.M - B).norm(), 1e-10 * B.norm());
}

TEST(CostMatrix, Errors)
{
    const Fixture f = make(3, 40, 2, 1);
    EXPECT_EQ(kind_of([&] { build_cost_matrix(f.Z, {}, kW); }), ErrorKind::PartnerLengthMismatch);
    const RowVector shorter = f.partners[0].head(39);
    EXPECT_EQ(kind_of([&] { build_cost_matrix(f.Z, {&shorter}, kW); }), ErrorKind::PartnerLengthMismatch);
    std::vector<Matrix> Y{f.Z, f.Z};
    PeerOrder self;
    self.order = {0};
    EXPECT_EQ(kind_of([&] { build_cost_matrix(0, 0, f.Z, Y, self, kW); }), ErrorKind::PartnerLengthMismatch);
}

TEST(InnerExtract, PeerModeReturnsTopEigenvector)
{
    const Fixture f = make(5, 400, 3, 5);
    InnerOptions o;
    const InnerResult r = inner_extract(f.Z, f.ptr, Vector::Unit(5, 2), o);
    const CostMatrix M = build_cost_matrix(f.Z, f.ptr, kW);
    const auto [u, lambda] = oracle::power_iteration(M.M);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.mode, ExtractMode::Peer);
    EXPECT_NEAR(std::abs(r.u.dot(u)), 1.0, 1e-8);
    EXPECT_NEAR(r.lambda, lambda, 1e-9 * lambda);
    EXPECT_TRUE(nondecreasing(r.trace, 1e-9));
    EXPECT_NEAR(r.trace.back(), r.lambda, 1e-12 * r.lambda);
}

TEST(InnerExtract, SelfModeTraceIsMonotoneAndFindsASource)
{
    for (unsigned s = 0; s < 20; ++s) {
        const Matrix S = oracle::laplace(4, 3000, 300 + s);
        const Matrix A = oracle::gaussian(4, 4, 400 + s);
        const PreprocessedSubject p = whiten(A * S);
        InnerOptions o;
        const InnerResult r = inner_extract(p.Z, {}, Vector::Ones(4), o);
        EXPECT_EQ(r.mode, ExtractMode::Self);
        EXPECT_TRUE(nondecreasing(r.trace, 1e-9)) << "seed " << s;
        const RowVector y = r.u.transpose() * p.Z;
        double best = 0.0;
        for (int i = 0; i < 4; ++i) best = std::max(best, std::abs(correlation(y, S.row(i))));
        EXPECT_GT(best, 0.95) << "seed " << s;
    }
}

TEST(InnerExtract, Errors)
{
    const Fixture f = make(3, 40, 2, 1);
    InnerOptions o;
    EXPECT_EQ(kind_of([&] { inner_extract(f.Z, f.ptr, Vector::Zero(3), o); }), ErrorKind::ZeroSource);
    EXPECT_EQ(kind_of([&] { inner_extract(f.Z, f.ptr, Vector::Ones(2), o); }), ErrorKind::LengthMismatch);
}

TEST(Deflate, RemovesTheSource)
{
    const Matrix Z = oracle::laplace(4, 500, 8);
    const RowVector y = standardize(Z.row(0) + 0.3 * Z.row(2));
    const Matrix D = deflate(Z, y);
    EXPECT_LT((D * y.transpose()).norm(), 1e-9);
    EXPECT_LT((deflate(D, y) - D).norm(), 1e-9);
    EXPECT_EQ(kind_of([&] { deflate(Z, RowVector::Zero(500)); }), ErrorKind::ZeroSource);
}

TEST(PeerOrder, IsPermutationOfCandidates)
{
    Rng rng(1);
    const std::vector<int> cand{0, 2, 3, 5, 8};
    const PeerOrder p = PeerOrder::random(cand, rng);
    auto sorted = p.order;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, cand);
    EXPECT_EQ(p.n(), 5);
}

TEST(SlotOrder, ByMeanCostThenKurtosis)
{
    const Matrix Y = oracle::laplace(3, 2000, 2);
    Matrix Yk = Y;
    Yk.row(2) = oracle::gaussian(1, 2000, 3).row(0);
    EXPECT_EQ(detail::slot_order({{3.0, 1.0, 2.0}, {3.0, 1.0, 2.0}}, {Yk, Yk}), (std::vector<int>{0, 2, 1}));
    // equal costs: the heavier-tailed slot comes first
    EXPECT_EQ(detail::slot_order({{1.0, 1.0, 1.0}}, {Yk}).back(), 2);
}

namespace {

SimulatedData small_scenario(std::uint64_t seed)
{
    ScenarioSpec s;
    s.K = 5;
    s.C1 = 2;
    s.C2 = 0;
    s.C3 = 1;
    s.clusters = 1;
    s.V = 1024;
    s.N = 40;
    s.seed = seed;
    return generate_dataset(s);
}

}  // namespace

TEST(Engine, RecoversJointSourcesOnSmallScenario)
{
    const SimulatedData d = small_scenario(3);
    AlgoConfig c;
    c.seed = 3;
    c.record_snapshots = true;
    c.classify = false;
    const Decomposition dec = run_jpji_ica(d.datasets, c);
    ASSERT_EQ(dec.n_subjects(), 5);
    EXPECT_EQ(dec.n_slots(), 3);
    EXPECT_EQ(dec.snapshots.size(), 5u);
    for (const auto& s : dec.subjects) {
        for (int r = 0; r < s.U.rows(); ++r) EXPECT_NEAR(s.U.row(r).norm(), 1.0, 1e-12);
        EXPECT_LT((s.Y - s.U * s.pre.Z).norm(), 1e-9 * s.Y.norm());
    }
    const Matching m = match_sources(d.truth, dec);
    for (const auto& row : m.abs_corr)
        for (double r : row) EXPECT_GT(r, 0.95);
    const Decomposition last = decomposition_at_sweep(dec, 5, c);
    for (int k = 0; k < 5; ++k) EXPECT_TRUE(last.subjects[k].U == dec.subjects[k].U);
    for (const auto& t : dec.traces) EXPECT_TRUE(nondecreasing(t.costs, 1e-9));
}

TEST(Engine, ResultIndependentOfThreadCount)
{
    const SimulatedData d = small_scenario(4);
    AlgoConfig c;
    c.seed = 4;
    const int saved = kernels::max_threads();
    kernels::set_threads(1);
    const Decomposition a = run_jpji_ica(d.datasets, c);
    kernels::set_threads(4);
    const Decomposition b = run_jpji_ica(d.datasets, c);
    kernels::set_threads(saved);
    for (int k = 0; k < 5; ++k) {
        EXPECT_TRUE(a.subjects[k].U == b.subjects[k].U);
        EXPECT_EQ(a.labels[k], b.labels[k]);
    }
    EXPECT_EQ(a.features.jpjif, b.features.jpjif);
}

TEST(Engine, SnapshotOfShorterRunMatches)
{
    const SimulatedData d = small_scenario(5);
    AlgoConfig c;
    c.seed = 5;
    c.classify = false;
    c.record_snapshots = true;
    const Decomposition longer = run_jpji_ica(d.datasets, c);
    c.max_outer = 3;
    const Decomposition shorter = run_jpji_ica(d.datasets, c);
    for (int k = 0; k < 5; ++k) EXPECT_TRUE(longer.snapshots[2].U[k] == shorter.subjects[k].U);
}
