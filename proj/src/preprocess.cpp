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
 * @file preprocess.cpp
 *
 *****************************************************************************/

#include "jpji/preprocess.hpp"

#include "jpji/kernels.hpp"
#include "jpji/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace jpji {

namespace {

struct Spectrum {
    Vector values;          // descending
    Eigen::MatrixXd vectors;  // columns match values
    Vector mean;
};

Spectrum time_spectrum(const Matrix& O)
{
    const double n = static_cast<double>(O.cols());
    Spectrum s;
    s.mean = kernels::row_sums(O) / n;
    Matrix Oc = O.colwise() - s.mean;
    Matrix R = kernels::gram(Oc) / n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (R + R.transpose()));
    const Eigen::Index N = R.rows();
    s.values = es.eigenvalues().reverse();
    s.vectors = es.eigenvectors().rowwise().reverse();
    for (Eigen::Index j = 0; j < N; ++j) {
        Eigen::Index imax = 0;
        s.vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (s.vectors(imax, j) < 0) s.vectors.col(j) *= -1.0;
    }
    return s;
}

int positive_rank(const Vector& ev)
{
    const double lmax = ev.size() > 0 ? ev(0) : 0.0;
    if (!(lmax > 0.0)) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > kRankTolerance * lmax) ++r;
    return r;
}

}  // namespace

Vector time_covariance_spectrum(const SubjectDataset& O)
{
    return time_spectrum(O.observations).values;
}

double ppca_bic(const Vector& ev, int c, int n_voxels)
{
    const int N = static_cast<int>(ev.size());
    if (c < 1 || c >= N) throw Error(ErrorKind::OrderOutOfRange, "BIC order must lie in [1, N-1]");
    double logdet = 0.0;
    for (int i = 0; i < c; ++i) logdet += std::log(ev(i));
    double rest = 0.0;
    for (int i = c; i < N; ++i) rest += std::max(ev(i), 0.0);
    const double sigma2 = rest / (N - c);
    if (!(sigma2 > 0.0)) return -std::numeric_limits<double>::infinity();
    const double V = static_cast<double>(n_voxels);
    const double logL =
        -0.5 * V * (logdet + (N - c) * std::log(sigma2) + N * (1.0 + std::log(2.0 * std::numbers::pi)));
    const double p = static_cast<double>(N) * c - 0.5 * c * (c - 1.0) + 1.0;
    return -2.0 * logL + p * std::log(V);
}

int default_c_max(int n_time)
{
    return std::max(1, std::min(n_time - 1, 64));
}

namespace {

int order_from_spectrum(const SubjectDataset& O, const Vector& ev, int c_max, std::vector<std::string>* warnings)
{
    const int N = O.n_time();
    const int V = O.n_voxels();
    if (c_max < 1 || c_max > std::min(N, V) - 1)
        throw Error(ErrorKind::OrderOutOfRange, "c_max must lie in [1, min(N, V) - 1]");
    const int rank = positive_rank(ev);
    if (rank < c_max) {
        if (warnings)
            warnings->push_back("subject '" + O.id + "': RankDeficientCovariance, positive rank " +
                                std::to_string(rank) + " < c_max " + std::to_string(c_max));
        return std::max(rank, 1);
    }
    int best = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int c = 1; c <= c_max; ++c) {
        const double b = ppca_bic(ev, c, V);
        if (b < best_bic) {
            best_bic = b;
            best = c;
        }
    }
    return best;
}

PcaResult pca_from_spectrum(const SubjectDataset& O, const Spectrum& s, int C)
{
    const int rank = positive_rank(s.values);
    if (C < 1 || C > rank)
        throw Error(ErrorKind::OrderExceedsRank, "requested " + std::to_string(C) + " components, rank is " +
                                                     std::to_string(rank));
    PcaResult r;
    r.mean = s.mean;
    r.loadings = s.vectors.leftCols(C).transpose();
    Matrix Oc = O.observations.colwise() - s.mean;
    r.scores = r.loadings * Oc;
    const double total = s.values.cwiseMax(0.0).sum();
    r.retained_variance = total > 0.0 ? s.values.head(C).sum() / total : 0.0;
    return r;
}

PreprocessedSubject from_pca(const PcaResult& pca, int C)
{
    PreprocessedSubject w = whiten(pca.scores);
    PreprocessedSubject p;
    p.C = C;
    p.Z = std::move(w.Z);
    p.W_total = w.W_total * pca.loadings;
    p.mean = pca.mean;
    p.retained_variance = pca.retained_variance;
    return p;
}

int c_max_for(const SubjectDataset& d, const AlgoConfig& config)
{
    return config.c_max > 0 ? std::min(config.c_max, std::min(d.n_time(), d.n_voxels()) - 1)
                            : std::min(default_c_max(d.n_time()), d.n_voxels() - 1);
}

}  // namespace

int estimate_order_bic(const SubjectDataset& O, int c_max, std::vector<std::string>* warnings)
{
    const int N = O.n_time();
    const int V = O.n_voxels();
    if (c_max < 1 || c_max > std::min(N, V) - 1)
        throw Error(ErrorKind::OrderOutOfRange, "c_max must lie in [1, min(N, V) - 1]");
    return order_from_spectrum(O, time_covariance_spectrum(O), c_max, warnings);
}

PcaResult pca_reduce(const SubjectDataset& O, int C)
{
    return pca_from_spectrum(O, time_spectrum(O.observations), C);
}

PreprocessedSubject whiten(const Matrix& X)
{
    const double n = static_cast<double>(X.cols());
    PreprocessedSubject p;
    p.mean = kernels::row_sums(X) / n;
    Matrix Xc = X.colwise() - p.mean;
    const Matrix R = kernels::gram(Xc) / n;
    p.W_total = inverse_sqrt_psd(0.5 * (R + R.transpose()));
    p.Z = p.W_total * Xc;
    p.C = static_cast<int>(X.rows());
    p.retained_variance = 1.0;
    return p;
}

PreprocessedSubject preprocess_subject(const SubjectDataset& O, int C)
{
    return from_pca(pca_reduce(O, C), C);
}

std::vector<int> select_orders(const std::vector<SubjectDataset>& datasets, const AlgoConfig& config,
                               std::vector<std::string>* warnings)
{
    const int K = static_cast<int>(datasets.size());
    std::vector<int> orders(static_cast<std::size_t>(K), config.fixed_components);
    if (config.components == ComponentPolicy::Fixed) return orders;
    std::vector<std::vector<std::string>> w(static_cast<std::size_t>(K));
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < K; ++k) {
        orders[k] = estimate_order_bic(datasets[k], c_max_for(datasets[k], config), &w[k]);
    }
    if (warnings)
        for (auto& v : w) warnings->insert(warnings->end(), v.begin(), v.end());
    if (config.components == ComponentPolicy::GlobalMin) {
        const int m = *std::min_element(orders.begin(), orders.end());
        std::fill(orders.begin(), orders.end(), m);
    }
    return orders;
}

std::vector<PreprocessedSubject> preprocess_datasets(const std::vector<SubjectDataset>& datasets,
                                                     const AlgoConfig& config, std::vector<std::string>* warnings)
{
    if (config.components == ComponentPolicy::Fixed) {
        const std::vector<int> orders = select_orders(datasets, config, warnings);
        std::vector<PreprocessedSubject> pre;
        for (std::size_t k = 0; k < datasets.size(); ++k) pre.push_back(preprocess_subject(datasets[k], orders[k]));
        return pre;
    }
    const int K = static_cast<int>(datasets.size());
    std::vector<Spectrum> spectra(static_cast<std::size_t>(K));
    std::vector<int> orders(static_cast<std::size_t>(K), 0);
    std::vector<std::vector<std::string>> w(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        spectra[k] = time_spectrum(datasets[k].observations);
        orders[k] = order_from_spectrum(datasets[k], spectra[k].values, c_max_for(datasets[k], config), &w[k]);
    }
    if (warnings)
        for (auto& v : w) warnings->insert(warnings->end(), v.begin(), v.end());
    if (config.components == ComponentPolicy::GlobalMin)
        std::fill(orders.begin(), orders.end(), *std::min_element(orders.begin(), orders.end()));
    std::vector<PreprocessedSubject> pre(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) pre[k] = from_pca(pca_from_spectrum(datasets[k], spectra[k], orders[k]), orders[k]);
    return pre;
}

}  // namespace jpji
