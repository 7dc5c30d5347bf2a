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
 * @file jpji.cpp
 *
 *****************************************************************************/

#include "jpji/jpji.hpp"

#include "jpji/kernels.hpp"
#include "jpji/preprocess.hpp"
#include "jpji/typing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jpji {

PeerOrder PeerOrder::random(const std::vector<int>& candidates, Rng& rng)
{
    PeerOrder p;
    p.order = candidates;
    rng.shuffle(p.order);
    return p;
}

double CostMatrix::contribution(int alpha, int eta) const
{
    const Vector& v = cumulants.at(static_cast<std::size_t>(alpha))[static_cast<std::size_t>(eta - 2)];
    return weights[static_cast<std::size_t>(eta - 2)] * v.squaredNorm();
}

double CostMatrix::contribution_at(const Vector& u, int alpha, int eta) const
{
    const Vector& v = cumulants.at(static_cast<std::size_t>(alpha))[static_cast<std::size_t>(eta - 2)];
    const double d = u.dot(v);
    return weights[static_cast<std::size_t>(eta - 2)] * d * d;
}

CostMatrix build_cost_matrix(const Matrix& Zk, const PartnerRows& partners, const std::array<double, 3>& weights,
                             CostEstimator estimator)
{
    const int n = static_cast<int>(partners.size());
    if (n == 0) throw Error(ErrorKind::PartnerLengthMismatch, "partner list is empty");
    const Eigen::Index V = Zk.cols();
    const Eigen::Index C = Zk.rows();
    for (const RowVector* p : partners)
        if (p->size() != V) throw Error(ErrorKind::PartnerLengthMismatch, "partner length differs from Z");
    const double nv = static_cast<double>(V);

    Matrix A(n, V);
    for (int j = 0; j < n; ++j) A.row(j) = partners[j]->array() - partners[j]->mean();
    auto at = [n](int i) { return i % n; };

    Matrix P(3 * n, V);
    for (int j = 0; j < n; ++j) {
        P.row(j) = A.row(j);
        P.row(n + j) = A.row(j).cwiseProduct(A.row(at(j + 1)));
        P.row(2 * n + j) = P.row(n + j).cwiseProduct(A.row(at(j + 2)));
    }
    const Vector zbar = kernels::row_sums(Zk) / nv;
    const Vector psum = kernels::row_sums(P);
    Matrix proj = kernels::project(Zk, P);
    proj -= zbar * psum.transpose();
    proj /= nv;
    const Matrix pair = kernels::gram(A) / nv;

    CostMatrix out;
    out.weights = weights;
    out.M = Matrix::Zero(C, C);
    out.cumulants.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const int i0 = a, i1 = at(a + 1), i2 = at(a + 2);
        auto& cv = out.cumulants[static_cast<std::size_t>(a)];
        cv[0] = proj.col(i0);
        cv[1] = proj.col(n + a);
        cv[2] = proj.col(2 * n + a) - proj.col(i0) * pair(i1, i2) - proj.col(i1) * pair(i0, i2) -
                proj.col(i2) * pair(i0, i1);
        if (estimator == CostEstimator::SampleCumulant)
            for (int e = 0; e < 3; ++e) out.M.noalias() += weights[e] * cv[e] * cv[e].transpose();
    }
    if (estimator == CostEstimator::PerVoxel) {
        RowVector q = RowVector::Zero(V);
        for (int a = 0; a < n; ++a) {
            q += weights[0] * P.row(a).cwiseAbs2();
            q += weights[1] * P.row(n + a).cwiseAbs2();
            q += weights[2] * P.row(2 * n + a).cwiseAbs2();
        }
        Matrix Zc = Zk.colwise() - zbar;
        out.M = kernels::weighted_gram(Zc, q) / nv;
    }
    out.M = 0.5 * (out.M + out.M.transpose());
    return out;
}

CostMatrix build_cost_matrix(int k, int c, const Matrix& Zk, const std::vector<Matrix>& current_Y,
                             const PeerOrder& peers, const std::array<double, 3>& weights)
{
    std::vector<RowVector> rows;
    rows.reserve(peers.order.size());
    for (int j : peers.order) {
        if (j == k) throw Error(ErrorKind::PartnerLengthMismatch, "peer order contains the subject itself");
        rows.push_back(current_Y.at(static_cast<std::size_t>(j)).row(c));
    }
    if (rows.empty()) rows.push_back(current_Y.at(static_cast<std::size_t>(k)).row(c));
    PartnerRows ptr;
    for (const auto& r : rows) ptr.push_back(&r);
    return build_cost_matrix(Zk, ptr, weights);
}

CostMatrix first_alpha(const CostMatrix& M)
{
    CostMatrix out;
    out.weights = M.weights;
    out.cumulants.assign(M.cumulants.begin(), M.cumulants.begin() + std::min<std::ptrdiff_t>(1, M.n_alpha()));
    out.M = Matrix::Zero(M.M.rows(), M.M.cols());
    for (const auto& cv : out.cumulants)
        for (int e = 0; e < 3; ++e) out.M.noalias() += out.weights[e] * cv[e] * cv[e].transpose();
    return out;
}

double cost(const Vector& u, const CostMatrix& M)
{
    return u.dot(M.M * u);
}

namespace {

RowVector source_of(const Vector& u, const Matrix& Zk)
{
    RowVector y = u.transpose() * Zk;
    return standardize(y);
}

}  // namespace

InnerResult inner_extract(const Matrix& Zk, const PartnerRows& partners, const Vector& u0, const InnerOptions& options)
{
    if (u0.size() != Zk.rows()) throw Error(ErrorKind::LengthMismatch, "initial vector length differs from Z rows");
    if (!(u0.norm() > 0.0)) throw Error(ErrorKind::ZeroSource, "initial vector is zero");
    InnerResult r;
    Vector u = u0.normalized();

    if (!partners.empty()) {
        r.mode = ExtractMode::Peer;
        CostMatrix M = build_cost_matrix(Zk, partners, options.weights, options.estimator);
        if (options.single_alpha) M = first_alpha(M);
        const EigenPair top = dominant_eigenvector(M.M);
        r.trace.push_back(cost(u, M));
        for (int it = 0; it < options.cap; ++it) {
            const Vector un = top.u;
            const double d = 1.0 - std::pow(un.dot(u), 2);
            u = un;
            r.trace.push_back(cost(u, M));
            r.iterations = it + 1;
            if (d < options.eps0) {
                r.converged = true;
                break;
            }
        }
        r.u = u;
        r.lambda = top.lambda;
        if (!r.u.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite demixing vector");
        return r;
    }

    r.mode = ExtractMode::Self;
    for (int it = 0; it < options.cap; ++it) {
        const RowVector y = source_of(u, Zk);
        const CostMatrix M = build_cost_matrix(Zk, PartnerRows{&y}, options.weights, options.estimator);
        r.trace.push_back(cost(u, M));
        const EigenPair top = dominant_eigenvector(M.M);
        const double d = 1.0 - std::pow(top.u.dot(u), 2);
        u = top.u;
        r.iterations = it + 1;
        if (d < options.eps0) {
            r.converged = true;
            break;
        }
    }
    const RowVector y = source_of(u, Zk);
    const CostMatrix M = build_cost_matrix(Zk, PartnerRows{&y}, options.weights, options.estimator);
    r.lambda = cost(u, M);
    r.trace.push_back(r.lambda);
    r.u = u;
    if (!r.u.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite demixing vector");
    return r;
}

Matrix deflate(const Matrix& Z, const RowVector& y)
{
    if (y.size() != Z.cols()) throw Error(ErrorKind::LengthMismatch, "deflate: length mismatch");
    const double yy = y.squaredNorm();
    if (!(yy > 0.0)) throw Error(ErrorKind::ZeroSource, "cannot deflate by a zero source");
    Matrix Y1(1, y.size());
    Y1.row(0) = y;
    const Vector beta = kernels::project(Z, Y1).col(0) / yy;
    return Z - beta * y;
}

namespace detail {

std::vector<int> slot_order(const std::vector<std::vector<double>>& cost, const std::vector<Matrix>& Y)
{
    int cmin = std::numeric_limits<int>::max();
    int cmax = 0;
    for (const auto& row : cost) {
        cmin = std::min(cmin, static_cast<int>(row.size()));
        cmax = std::max(cmax, static_cast<int>(row.size()));
    }
    if (cost.empty()) return {};
    std::vector<double> mean(static_cast<std::size_t>(cmin), 0.0);
    std::vector<double> kurt(static_cast<std::size_t>(cmin), 0.0);
    for (int c = 0; c < cmin; ++c) {
        for (const auto& row : cost) mean[c] += row[c];
        mean[c] /= static_cast<double>(cost.size());
        kurt[c] = excess_kurtosis(Y.front().row(c));
    }
    std::vector<int> order(static_cast<std::size_t>(cmin));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (mean[a] != mean[b]) return mean[a] > mean[b];
        return kurt[a] > kurt[b];
    });
    for (int c = cmin; c < cmax; ++c) order.push_back(c);
    return order;
}

namespace {

std::vector<Matrix> demixing_from_sources(const std::vector<PreprocessedSubject>& pre,
                                          const std::vector<std::vector<RowVector>>& Y)
{
    std::vector<Matrix> U(pre.size());
    for (std::size_t k = 0; k < pre.size(); ++k) {
        const Matrix& Z = pre[k].Z;
        const int C = pre[k].C;
        Matrix Yk(C, Z.cols());
        for (int c = 0; c < C; ++c) Yk.row(c) = Y[k][static_cast<std::size_t>(c)];
        Matrix W = kernels::project(Z, Yk).transpose() / static_cast<double>(Z.cols());
        for (int c = 0; c < C; ++c) {
            const double nrm = W.row(c).norm();
            if (nrm > 0.0) W.row(c) /= nrm;
        }
        U[k] = std::move(W);
    }
    return U;
}

Matrix permute_rows(const Matrix& M, const std::vector<int>& order)
{
    Matrix out(M.rows(), M.cols());
    Eigen::Index r = 0;
    for (int c : order)
        if (c < M.rows()) out.row(r++) = M.row(c);
    return out;
}

template <class T>
std::vector<T> permute(const std::vector<T>& v, const std::vector<int>& order)
{
    std::vector<T> out;
    for (int c : order)
        if (c < static_cast<int>(v.size())) out.push_back(v[static_cast<std::size_t>(c)]);
    return out;
}

}  // namespace

EngineResult run_engine(const std::vector<std::string>& ids, const std::vector<PreprocessedSubject>& pre,
                        const AlgoConfig& config, const SlotExtractor& extract)
{
    const int K = static_cast<int>(pre.size());
    if (K == 0) throw Error(ErrorKind::EmptyInput, "no subjects");
    int cmax = 0;
    for (const auto& p : pre) cmax = std::max(cmax, p.C);

    std::vector<std::vector<RowVector>> Y(static_cast<std::size_t>(K));
    std::vector<std::vector<Vector>> Uw(static_cast<std::size_t>(K));
    std::vector<std::vector<double>> cst(static_cast<std::size_t>(K));
    std::vector<std::vector<SourceKind>> dec(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const int C = pre[k].C;
        for (int c = 0; c < C; ++c) Y[k].push_back(standardize(pre[k].Z.row(c)));
        Uw[k].assign(static_cast<std::size_t>(C), Vector());
        cst[k].assign(static_cast<std::size_t>(C), 0.0);
        dec[k].assign(static_cast<std::size_t>(C), SourceKind::Joint);
    }

    EngineResult result;
    Decomposition& out = result.decomposition;
    out.subject_ids = ids;

    for (int s = 1; s <= config.max_outer; ++s) {
        std::vector<Matrix> Zw;
        Zw.reserve(static_cast<std::size_t>(K));
        for (const auto& p : pre) Zw.push_back(p.Z);

        for (int c = 0; c < cmax; ++c) {
            std::vector<int> holders;
            for (int k = 0; k < K; ++k)
                if (pre[k].C > c) holders.push_back(k);
            const int passes = s == 1 ? 1 : config.max_passes;
            for (int p = 0; p < passes; ++p) {
                double maxd = 0.0;
                for (int k : holders) {
                    SlotContext ctx;
                    ctx.sweep = s;
                    ctx.pass = p;
                    ctx.subject = k;
                    ctx.slot = c;
                    ctx.Zw = &Zw[k];
                    ctx.Y = &Y;
                    for (int j : holders)
                        if (j != k) ctx.candidates.push_back(j);
                    ctx.u_prev = Uw[k][c];
                    SlotOutcome o = extract(ctx);
                    const double d = ctx.u_prev.size() == o.u.size() ? 1.0 - std::pow(o.u.dot(ctx.u_prev), 2) : 1.0;
                    maxd = std::max(maxd, d);
                    Uw[k][c] = o.u;
                    cst[k][c] = o.cost;
                    dec[k][c] = o.decision;
                    Y[k][c] = source_of(o.u, Zw[k]);
                    for (auto& t : o.traces) {
                        t.sweep = s;
                        t.pass = p;
                        t.subject = k;
                        t.slot = c;
                        if (!t.converged)
                            out.warnings.push_back("ConvergenceWarning: sweep " + std::to_string(s) + " slot " +
                                                   std::to_string(c) + " subject " + ids[k]);
                        out.traces.push_back(std::move(t));
                    }
                }
                if (maxd < config.pass_tol) break;
            }
            for (int k : holders) Zw[k] = deflate(Zw[k], Y[k][c]);
        }

        if (config.record_snapshots || s == config.max_outer) {
            const std::vector<Matrix> U = demixing_from_sources(pre, Y);
            std::vector<Matrix> Yfull(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k) Yfull[k] = U[k] * pre[k].Z;
            const std::vector<int> order = slot_order(cst, Yfull);
            if (config.record_snapshots) {
                Snapshot snap;
                snap.sweep = s;
                for (int k = 0; k < K; ++k) snap.U.push_back(permute_rows(U[k], order));
                out.snapshots.push_back(std::move(snap));
            }
            if (s == config.max_outer) {
                out.subjects.resize(static_cast<std::size_t>(K));
                out.final_cost.resize(static_cast<std::size_t>(K));
                result.decisions.resize(static_cast<std::size_t>(K));
                for (int k = 0; k < K; ++k) {
                    out.subjects[k].pre = pre[k];
                    out.subjects[k].U = permute_rows(U[k], order);
                    out.subjects[k].Y = out.subjects[k].U * pre[k].Z;
                    out.final_cost[k] = permute(cst[k], order);
                    result.decisions[k] = permute(dec[k], order);
                }
            }
        }
    }
    out.sweeps_run = config.max_outer;
    return result;
}

}  // namespace detail

std::vector<PreprocessedSubject> preprocess_all(const std::vector<SubjectDataset>& datasets, const AlgoConfig& config,
                                                std::vector<std::string>* warnings)
{
    return preprocess_datasets(datasets, config, warnings);
}

Decomposition run_jpji_ica(const std::vector<std::string>& ids, const std::vector<PreprocessedSubject>& pre,
                           const AlgoConfig& config)
{
    config.validate();
    InnerOptions opt;
    opt.weights = config.weights;
    opt.eps0 = config.eps0;
    opt.cap = config.inner_cap;
    opt.estimator = config.estimator;

    auto extract = [&](const detail::SlotContext& ctx) {
        const Matrix& Zw = *ctx.Zw;
        Vector u0 = ctx.u_prev;
        if (u0.size() != Zw.rows()) u0 = Vector::Unit(Zw.rows(), ctx.slot);
        detail::SlotOutcome o;
        auto record = [&](const InnerResult& r) {
            InnerTrace t;
            t.mode = r.mode;
            t.converged = r.converged;
            t.costs = r.trace;
            o.traces.push_back(std::move(t));
        };
        if (ctx.candidates.empty()) {
            const InnerResult r = inner_extract(Zw, {}, u0, opt);
            record(r);
            o.u = r.u;
            o.cost = r.lambda;
            o.decision = SourceKind::Individual;
            return o;
        }
        Rng rng(split_seed(config.seed, {tag::peers, static_cast<std::uint64_t>(ctx.sweep),
                                         static_cast<std::uint64_t>(ctx.subject), static_cast<std::uint64_t>(ctx.slot)}));
        const PeerOrder peers = PeerOrder::random(ctx.candidates, rng);
        PartnerRows rows;
        for (int j : peers.order) rows.push_back(&(*ctx.Y)[j][ctx.slot]);
        const InnerResult r = inner_extract(Zw, rows, u0, opt);
        record(r);
        o.u = r.u;
        o.cost = r.lambda;
        o.decision = SourceKind::Joint;
        if (ctx.sweep > 1 && r.lambda < config.self_threshold) {
            const InnerResult rs = inner_extract(Zw, {}, r.u, opt);
            record(rs);
            o.u = rs.u;
            o.cost = rs.lambda;
            o.decision = SourceKind::Individual;
        }
        return o;
    };

    detail::EngineResult er = detail::run_engine(ids, pre, config, extract);
    Decomposition dec = std::move(er.decomposition);
    dec.algorithm = "jpji";
    if (config.classify) classify_decomposition(dec, config);
    return dec;
}

Decomposition run_jpji_ica(const std::vector<SubjectDataset>& datasets, const AlgoConfig& config)
{
    const ValidationResult v = validate_analysis_input(datasets, config);
    std::vector<std::string> warnings = v.warnings;
    const std::vector<PreprocessedSubject> pre = preprocess_all(datasets, config, &warnings);
    std::vector<std::string> ids;
    for (const auto& d : datasets) ids.push_back(d.id);
    Decomposition dec = run_jpji_ica(ids, pre, config);
    dec.warnings.insert(dec.warnings.begin(), warnings.begin(), warnings.end());
    return dec;
}

Decomposition decomposition_at_sweep(const Decomposition& dec, int sweep, const AlgoConfig& config)
{
    const auto it = std::find_if(dec.snapshots.begin(), dec.snapshots.end(),
                                 [&](const Snapshot& s) { return s.sweep == sweep; });
    if (it == dec.snapshots.end())
        throw Error(ErrorKind::InvalidConfig, "no snapshot recorded for sweep " + std::to_string(sweep));
    Decomposition out;
    out.algorithm = dec.algorithm;
    out.subject_ids = dec.subject_ids;
    out.sweeps_run = sweep;
    out.subjects = dec.subjects;
    for (std::size_t k = 0; k < out.subjects.size(); ++k) {
        out.subjects[k].U = it->U[k];
        out.subjects[k].Y = it->U[k] * out.subjects[k].pre.Z;
    }
    if (config.classify) classify_decomposition(out, config);
    return out;
}

}  // namespace jpji
