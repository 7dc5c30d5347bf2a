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
 * @file test_preprocess.cpp
 *
 *****************************************************************************/

#include "jpji/numerics.hpp"
#include "jpji/preprocess.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

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

/// O = A S + noise, rank C signal in N time points.
SubjectDataset low_rank(int N, int C, int V, double noise, unsigned seed)
{
    const Matrix A = oracle::gaussian(N, C, seed);
    const Matrix S = oracle::laplace(C, V, seed + 1);
    Matrix O = A * S + noise * oracle::gaussian(N, V, seed + 2);
    O.colwise() += oracle::gaussian(N, 1, seed + 3).col(0);
    return {"s", O};
}

/// PPCA BIC from the explicit model covariance, log-determinant by Cholesky.
double bic_from_model(const Matrix& O, int c)
{
    const int N = static_cast<int>(O.rows());
    const double V = static_cast<double>(O.cols());
    const Eigen::MatrixXd S = oracle::covariance_loops(O);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::VectorXd ev = es.eigenvalues().reverse();
    const Eigen::MatrixXd U = es.eigenvectors().rowwise().reverse().leftCols(c);
    const double sigma2 = ev.tail(N - c).sum() / (N - c);
    Eigen::MatrixXd Cm = sigma2 * Eigen::MatrixXd::Identity(N, N);
    for (int i = 0; i < c; ++i) Cm += (ev(i) - sigma2) * U.col(i) * U.col(i).transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(Cm);
    const Eigen::MatrixXd L = llt.matrixL();
    double logdet = 0.0;
    for (int i = 0; i < N; ++i) logdet += 2.0 * std::log(L(i, i));
    const double tr = llt.solve(S).trace();
    const double logL = -0.5 * V * (N * std::log(2.0 * std::numbers::pi) + logdet + tr);
    const double p = N * c - 0.5 * c * (c - 1.0) + 1.0;
    return -2.0 * logL + p * std::log(V);
}

}  // namespace

TEST(Spectrum, DescendingAndSumsToTrace)
{
    const SubjectDataset d = low_rank(12, 3, 800, 0.3, 1);
    const Vector ev = time_covariance_spectrum(d);
    for (Eigen::Index i = 1; i < ev.size(); ++i) EXPECT_GE(ev(i - 1), ev(i));
    const Matrix R = oracle::covariance_loops(d.observations);
    EXPECT_NEAR(ev.sum(), R.trace(), 1e-9 * R.trace());
    EXPECT_NEAR(ev(0), oracle::power_iteration(R).second, 1e-8 * ev(0));
}

TEST(Bic, MatchesExplicitModelLikelihood)
{
    const SubjectDataset d = low_rank(10, 3, 500, 0.5, 2);
    const Vector ev = time_covariance_spectrum(d);
    for (int c = 1; c < 10; ++c)
        EXPECT_NEAR(ppca_bic(ev, c, 500), bic_from_model(d.observations, c), 1e-7 * std::abs(bic_from_model(d.observations, c)))
            << "c=" << c;
    EXPECT_EQ(kind_of([&] { ppca_bic(ev, 0, 500); }), ErrorKind::OrderOutOfRange);
    EXPECT_EQ(kind_of([&] { ppca_bic(ev, 10, 500); }), ErrorKind::OrderOutOfRange);
}

TEST(Bic, RecoversPlantedOrder)
{
    for (unsigned s = 0; s < 5; ++s) {
        const int C = 2 + static_cast<int>(s);
        EXPECT_EQ(estimate_order_bic(low_rank(40, C, 3000, 0.2, 10 + s), 20), C) << "seed " << s;
    }
}

TEST(Bic, RankDeficientReturnsRankWithWarning)
{
    SubjectDataset d = low_rank(20, 4, 500, 0.0, 3);
    std::vector<std::string> w;
    EXPECT_EQ(estimate_order_bic(d, 10, &w), 4);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NE(w[0].find("RankDeficientCovariance"), std::string::npos);
    EXPECT_EQ(kind_of([&] { estimate_order_bic(d, 20, nullptr); }), ErrorKind::OrderOutOfRange);
}

TEST(DefaultCmax, Bounds)
{
    EXPECT_EQ(default_c_max(150), 64);
    EXPECT_EQ(default_c_max(30), 29);
    EXPECT_EQ(default_c_max(1), 1);
}

TEST(Pca, ScoresAreUncorrelatedAndOrdered)
{
    const SubjectDataset d = low_rank(15, 4, 1000, 0.2, 4);
    const PcaResult p = pca_reduce(d, 4);
    ASSERT_EQ(p.scores.rows(), 4);
    ASSERT_EQ(p.loadings.cols(), 15);
    const Matrix R = oracle::covariance_loops(p.scores);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) EXPECT_NEAR(R(i, j), 0.0, 1e-9 * R(0, 0));
    for (int i = 1; i < 4; ++i) EXPECT_GE(R(i - 1, i - 1), R(i, i));
    EXPECT_LT((p.loadings * p.loadings.transpose() - Matrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_GT(p.retained_variance, 0.9);
    EXPECT_LE(p.retained_variance, 1.0);
    for (int i = 0; i < 4; ++i) {
        Eigen::Index at;
        p.loadings.row(i).cwiseAbs().maxCoeff(&at);
        EXPECT_GT(p.loadings(i, at), 0.0);
    }
}

TEST(Pca, OrderAboveRankThrows)
{
    const SubjectDataset d = low_rank(15, 3, 300, 0.0, 5);
    EXPECT_EQ(kind_of([&] { pca_reduce(d, 5); }), ErrorKind::OrderExceedsRank);
}

TEST(Whiten, IdentityCovarianceManySeeds)
{
    for (unsigned s = 0; s < 30; ++s) {
        const SubjectDataset d = low_rank(30, 6, 2000, 0.1, 100 + 7 * s);
        const PreprocessedSubject p = preprocess_subject(d, 6);
        EXPECT_LT((oracle::covariance_loops(p.Z) - Matrix::Identity(6, 6)).norm(), 1e-6);
        EXPECT_LT(p.Z.rowwise().mean().norm(), 1e-10);
        Matrix X = d.observations.colwise() - p.mean;
        EXPECT_LT((p.W_total * X - p.Z).norm() / p.Z.norm(), 1e-10);
    }
}

TEST(SelectOrders, Policies)
{
    std::vector<SubjectDataset> ds{low_rank(30, 3, 2000, 0.1, 20), low_rank(30, 5, 2000, 0.1, 21)};
    AlgoConfig c;
    c.c_max = 12;
    c.components = ComponentPolicy::Auto;
    EXPECT_EQ(select_orders(ds, c), (std::vector<int>{3, 5}));
    c.components = ComponentPolicy::GlobalMin;
    EXPECT_EQ(select_orders(ds, c), (std::vector<int>{3, 3}));
    c.components = ComponentPolicy::Fixed;
    c.fixed_components = 4;
    EXPECT_EQ(select_orders(ds, c), (std::vector<int>{4, 4}));
}

TEST(PreprocessDatasets, MatchesPerSubjectPipeline)
{
    std::vector<SubjectDataset> ds;
    for (int k = 0; k < 4; ++k) ds.push_back(low_rank(40, 3 + k, 512, 0.05, 70 + k));
    for (auto policy : {ComponentPolicy::GlobalMin, ComponentPolicy::Auto}) {
        AlgoConfig c;
        c.components = policy;
        c.c_max = 12;
        const std::vector<int> orders = select_orders(ds, c);
        const auto pre = preprocess_datasets(ds, c);
        for (int k = 0; k < 4; ++k) {
            const PreprocessedSubject ref = preprocess_subject(ds[k], orders[k]);
            EXPECT_EQ(pre[k].C, orders[k]);
            EXPECT_TRUE(pre[k].Z == ref.Z);
            EXPECT_TRUE(pre[k].W_total == ref.W_total);
        }
    }
}
