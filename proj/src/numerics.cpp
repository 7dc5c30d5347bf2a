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
 * @file numerics.cpp
 *
 *****************************************************************************/

#include "jpji/numerics.hpp"

#include "jpji/kernels.hpp"
#include "jpji/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace jpji {

namespace {

void check_order(int order)
{
    if (order < 2 || order > 4) throw Error(ErrorKind::OrderOutOfRange, "cumulant order must be 2, 3 or 4");
}

RowVector centered(const RowVector& x)
{
    return x.array() - x.mean();
}

}  // namespace

double cross_cumulant(int order, const std::vector<RowVector>& series)
{
    check_order(order);
    if (static_cast<int>(series.size()) != order)
        throw Error(ErrorKind::LengthMismatch, "cross_cumulant needs exactly 'order' series");
    const Eigen::Index V = series[0].size();
    if (V == 0) throw Error(ErrorKind::LengthMismatch, "empty series");
    for (const auto& s : series)
        if (s.size() != V) throw Error(ErrorKind::LengthMismatch, "series lengths differ");

    std::vector<RowVector> x;
    for (const auto& s : series) x.push_back(centered(s));
    const double n = static_cast<double>(V);
    auto m2 = [&](int i, int j) { return x[i].cwiseProduct(x[j]).sum() / n; };
    if (order == 2) return m2(0, 1);
    if (order == 3) return x[0].cwiseProduct(x[1]).cwiseProduct(x[2]).sum() / n;
    const double m4 = x[0].cwiseProduct(x[1]).cwiseProduct(x[2]).cwiseProduct(x[3]).sum() / n;
    return m4 - m2(0, 1) * m2(2, 3) - m2(0, 2) * m2(1, 3) - m2(0, 3) * m2(1, 2);
}

CumulantVector cumulant_vector(const Matrix& Z, const PartnerRows& partners, int order)
{
    check_order(order);
    if (static_cast<int>(partners.size()) != order - 1)
        throw Error(ErrorKind::LengthMismatch, "cumulant_vector needs order-1 partners");
    const Eigen::Index V = Z.cols();
    for (const RowVector* p : partners)
        if (p->size() != V) throw Error(ErrorKind::LengthMismatch, "partner length differs from Z");
    if (V == 0) throw Error(ErrorKind::LengthMismatch, "empty series");
    const double n = static_cast<double>(V);

    std::vector<RowVector> a;
    for (const RowVector* p : partners) a.push_back(centered(*p));

    // rows of P: the partner products whose projections are needed
    Matrix P;
    if (order == 2) {
        P.resize(1, V);
        P.row(0) = a[0];
    } else if (order == 3) {
        P.resize(1, V);
        P.row(0) = a[0].cwiseProduct(a[1]);
    } else {
        P.resize(4, V);
        P.row(0) = a[0].cwiseProduct(a[1]).cwiseProduct(a[2]);
        P.row(1) = a[0];
        P.row(2) = a[1];
        P.row(3) = a[2];
    }
    const Vector zbar = kernels::row_sums(Z) / n;
    const Vector psum = kernels::row_sums(P);
    Matrix proj = kernels::project(Z, P);
    proj -= zbar * psum.transpose();
    proj /= n;

    CumulantVector out;
    out.order = order;
    out.values = proj.col(0);
    if (order == 4) {
        const double bc = a[1].cwiseProduct(a[2]).sum() / n;
        const double ac = a[0].cwiseProduct(a[2]).sum() / n;
        const double ab = a[0].cwiseProduct(a[1]).sum() / n;
        out.values -= proj.col(1) * bc + proj.col(2) * ac + proj.col(3) * ab;
    }
    return out;
}

EigenPair dominant_eigenvector(const Matrix& M)
{
    if (M.rows() != M.cols() || M.rows() == 0) throw Error(ErrorKind::NotSymmetric, "matrix must be square");
    if (!M.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");

    const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "eigen-solver failed");
    const Eigen::Index n = S.rows();
    const double lmax = es.eigenvalues()(n - 1);
    const double tol = 1e-12 * std::max(1.0, std::abs(lmax));

    Eigen::Index first = n - 1;
    while (first > 0 && std::abs(es.eigenvalues()(first - 1) - lmax) <= tol) --first;

    Vector u;
    if (first == n - 1) {
        u = es.eigenvectors().col(n - 1);
    } else {
        const Eigen::MatrixXd E = es.eigenvectors().rightCols(n - first);
        const Eigen::MatrixXd Pr = E * E.transpose();
        Eigen::Index pick = 0;
        while (pick < n && Pr(pick, pick) < 1e-8) ++pick;
        u = Pr.col(std::min(pick, n - 1));
    }
    u.normalize();
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (std::abs(u(i)) > std::abs(u(imax)) + 1e-14) imax = i;
    if (u(imax) < 0) u = -u;
    return {u, std::max(lmax, 0.0)};
}

Matrix covariance(const Matrix& X)
{
    if (X.cols() < 2) throw Error(ErrorKind::DegenerateSampleCount, "covariance needs at least 2 samples");
    const double n = static_cast<double>(X.cols());
    const Vector mean = kernels::row_sums(X) / n;
    Matrix Xc = X.colwise() - mean;
    Matrix R = kernels::gram(Xc) / n;
    return 0.5 * (R + R.transpose());
}

Matrix inverse_sqrt_psd(const Matrix& R)
{
    if (R.rows() != R.cols()) throw Error(ErrorKind::NotSymmetric, "matrix must be square");
    if (!R.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (R + R.transpose()));
    const Vector& w = es.eigenvalues();
    const double lmax = w.maxCoeff();
    if (!(lmax > 0.0)) throw Error(ErrorKind::SingularCovariance, "covariance is zero");
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w(i) < kRankTolerance * lmax)
            throw Error(ErrorKind::SingularCovariance, "eigenvalue below rank tolerance");
    const Eigen::MatrixXd& E = es.eigenvectors();
    Matrix W = E * w.cwiseSqrt().cwiseInverse().asDiagonal() * E.transpose();
    return 0.5 * (W + W.transpose());
}

namespace {

double sq_dist(const Vector& a, const Vector& b)
{
    return (a - b).squaredNorm();
}

KMeansResult lloyd(const std::vector<Vector>& pts, int k, Rng& rng)
{
    const int n = static_cast<int>(pts.size());
    std::vector<Vector> cent;
    cent.push_back(pts[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))]);
    std::vector<double> d2(static_cast<std::size_t>(n));
    while (static_cast<int>(cent.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : cent) best = std::min(best, sq_dist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        int pick = n - 1;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            for (int i = 0; i < n; ++i) {
                r -= d2[i];
                if (r < 0.0 && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            while (d2[pick] <= 0.0) --pick;
        } else {
            pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        }
        cent.push_back(pts[pick]);
    }

    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = sq_dist(pts[i], cent[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(pts[i], cent[c]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        std::vector<int> count(static_cast<std::size_t>(k), 0);
        for (int c = 0; c < k; ++c) cent[c].setZero();
        for (int i = 0; i < n; ++i) {
            cent[assign[i]] += pts[i];
            count[assign[i]]++;
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) {
                cent[c] /= count[c];
                continue;
            }
            // empty cluster: take the point farthest from its centroid
            int far = 0;
            double fd = -1.0;
            for (int i = 0; i < n; ++i) {
                const double d = sq_dist(pts[i], cent[assign[i]]);
                if (d > fd) {
                    fd = d;
                    far = i;
                }
            }
            cent[c] = pts[far];
            assign[far] = c;
            changed = true;
        }
        if (!changed) break;
    }
    KMeansResult r;
    r.assignment = assign;
    r.centroids = cent;
    for (int i = 0; i < n; ++i) r.inertia += sq_dist(pts[i], cent[assign[i]]);
    return r;
}

void canonicalize(KMeansResult& r)
{
    std::vector<int> map(r.centroids.size(), -1);
    int next = 0;
    for (int& a : r.assignment) {
        if (map[a] < 0) map[a] = next++;
        a = map[a];
    }
    std::vector<Vector> cent(r.centroids.size());
    for (std::size_t c = 0; c < map.size(); ++c)
        if (map[c] >= 0) cent[map[c]] = r.centroids[c];
    r.centroids = cent;
}

}  // namespace

KMeansResult kmeans(const std::vector<Vector>& points, int k, std::uint64_t seed, int restarts)
{
    if (k < 1 || points.empty()) throw Error(ErrorKind::TooFewPoints, "kmeans needs k >= 1 and points");
    std::set<std::vector<double>> distinct;
    for (const auto& p : points) distinct.insert(std::vector<double>(p.data(), p.data() + p.size()));
    if (static_cast<int>(distinct.size()) < k)
        throw Error(ErrorKind::TooFewPoints, "fewer distinct points than clusters");

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, restarts); ++r) {
        Rng rng(split_seed(seed, {tag::kmeans, static_cast<std::uint64_t>(r)}));
        KMeansResult cur = lloyd(points, k, rng);
        if (r == 0 || cur.inertia < best.inertia - 1e-12 * std::max(1.0, best.inertia)) best = std::move(cur);
    }
    canonicalize(best);
    return best;
}

double silhouette(const std::vector<Vector>& points, const std::vector<int>& assignment)
{
    const int n = static_cast<int>(points.size());
    if (n == 0) return 0.0;
    const int k = *std::max_element(assignment.begin(), assignment.end()) + 1;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
        std::vector<int> cnt(static_cast<std::size_t>(k), 0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[assignment[j]] += std::sqrt(sq_dist(points[i], points[j]));
            cnt[assignment[j]]++;
        }
        const int own = assignment[i];
        if (cnt[own] == 0) continue;
        const double a = sum[own] / cnt[own];
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c)
            if (c != own && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
        if (!std::isfinite(b)) continue;
        const double den = std::max(a, b);
        total += den > 0.0 ? (b - a) / den : 0.0;
    }
    return total / n;
}

double student_t_two_sided(double t, double df)
{
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    if (!(df > 0.0)) throw Error(ErrorKind::InsufficientSamples, "degrees of freedom must be positive");
    boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

TTestResult two_sample_t_test(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() < 2 || b.size() < 2) throw Error(ErrorKind::InsufficientSamples, "each group needs >= 2 values");
    auto moments = [](const std::vector<double>& x) {
        const double n = static_cast<double>(x.size());
        const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : x) ss += (v - m) * (v - m);
        return std::pair{m, ss / (n - 1.0)};
    };
    const auto [ma, va] = moments(a);
    const auto [mb, vb] = moments(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double sa = va / na;
    const double sb = vb / nb;
    const double se2 = sa + sb;
    TTestResult r;
    if (!(se2 > 0.0)) {
        r.df = na + nb - 2.0;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p = student_t_two_sided(r.t, r.df);
    return r;
}

std::vector<bool> bh_fdr(const std::vector<double>& pvalues, double q)
{
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::InvalidQ, "q must lie in (0, 1)");
    const std::size_t m = pvalues.size();
    std::vector<bool> mask(m, false);
    if (m == 0) return mask;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return pvalues[i] < pvalues[j]; });
    std::size_t last = 0;
    for (std::size_t r = 1; r <= m; ++r)
        if (pvalues[idx[r - 1]] <= static_cast<double>(r) / static_cast<double>(m) * q) last = r;
    for (std::size_t r = 0; r < last; ++r) mask[idx[r]] = true;
    return mask;
}

double excess_kurtosis(const RowVector& x)
{
    const RowVector c = centered(x);
    const double n = static_cast<double>(x.size());
    const double m2 = c.squaredNorm() / n;
    if (!(m2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double m4 = c.array().square().square().sum() / n;
    return m4 / (m2 * m2) - 3.0;
}

double correlation(const RowVector& a, const RowVector& b)
{
    if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "correlation: length mismatch");
    const RowVector ca = centered(a);
    const RowVector cb = centered(b);
    const double den = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
    return den > 0.0 ? ca.dot(cb) / den : 0.0;
}

RowVector standardize(const RowVector& x)
{
    RowVector c = centered(x);
    const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(c.size()));
    if (!(sd > 0.0)) throw Error(ErrorKind::ZeroSource, "cannot standardize a constant series");
    return c / sd;
}

}  // namespace jpji
