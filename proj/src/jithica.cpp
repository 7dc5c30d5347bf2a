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
 * @file jithica.cpp
 *
 *****************************************************************************/

#include "jpji/jithica.hpp"

#include "jpji/typing.hpp"

#include <algorithm>

namespace jpji {

void JiThicaConfig::validate() const
{
    if (!(sigma0 > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma0 must be > 0");
    base.validate();
}

CostMatrix build_m_joint(const Matrix& Zk, const PartnerRows& tuple, const std::array<double, 3>& weights)
{
    return first_alpha(build_cost_matrix(Zk, tuple, weights));
}

CostMatrix build_m_individual(const Matrix& Zk, const RowVector& y_self, const std::array<double, 3>& weights)
{
    if (!(y_self.squaredNorm() > 0.0)) throw Error(ErrorKind::ZeroSource, "own source is zero");
    return build_cost_matrix(Zk, PartnerRows{&y_self}, weights);
}

double default_baseline_sigma0(const Decomposition& classified)
{
    const int n = std::max(1, classified.n_subjects() - 1);
    return classified.features.sigma_opt / n;
}

Decomposition run_ji_thica(const std::vector<std::string>& ids, const std::vector<PreprocessedSubject>& pre,
                           const JiThicaConfig& config)
{
    config.validate();
    const AlgoConfig& base = config.base;
    InnerOptions opt;
    opt.weights = base.weights;
    opt.eps0 = base.eps0;
    opt.cap = base.inner_cap;
    opt.single_alpha = true;

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
        auto self_mode = [&](const Vector& start) {
            const InnerResult r = inner_extract(Zw, {}, start, opt);
            record(r);
            o.u = r.u;
            o.cost = r.lambda;
            o.decision = SourceKind::Individual;
        };
        if (ctx.candidates.empty()) {
            self_mode(u0);
            return o;
        }
        Rng rng(split_seed(base.seed, {tag::baseline, static_cast<std::uint64_t>(ctx.sweep),
                                       static_cast<std::uint64_t>(ctx.pass), static_cast<std::uint64_t>(ctx.subject),
                                       static_cast<std::uint64_t>(ctx.slot)}));
        const PeerOrder order = PeerOrder::random(ctx.candidates, rng);
        PartnerRows tuple;
        for (int i = 0; i < 3; ++i) tuple.push_back(&(*ctx.Y)[order.order[i % order.n()]][ctx.slot]);
        const EigenPair top = dominant_eigenvector(build_m_joint(Zw, tuple, base.weights).M);
        if (ctx.sweep == 1 || top.lambda > config.sigma0) {
            const InnerResult r = inner_extract(Zw, tuple, u0, opt);
            record(r);
            o.u = r.u;
            o.cost = r.lambda;
            o.decision = SourceKind::Joint;
            return o;
        }
        self_mode(top.u);
        return o;
    };

    detail::EngineResult er = detail::run_engine(ids, pre, base, extract);
    Decomposition dec = std::move(er.decomposition);
    dec.algorithm = "jithica";
    const int K = dec.n_subjects();
    dec.labels.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        for (SourceKind kind : er.decisions[k])
            dec.labels[k].push_back(kind == SourceKind::Joint && K > 1 ? SourceLabel::joint(K, k)
                                                                       : SourceLabel::individual());
    dec.features = compute_features(dec, base);
    dec.features.sigma_opt = config.sigma0;
    dec.features.sigma_method = "baseline";
    return dec;
}

Decomposition run_ji_thica(const std::vector<SubjectDataset>& datasets, const JiThicaConfig& config)
{
    const ValidationResult v = validate_analysis_input(datasets, config.base);
    std::vector<std::string> warnings = v.warnings;
    const auto pre = preprocess_all(datasets, config.base, &warnings);
    std::vector<std::string> ids;
    for (const auto& d : datasets) ids.push_back(d.id);
    Decomposition dec = run_ji_thica(ids, pre, config);
    dec.warnings.insert(dec.warnings.begin(), warnings.begin(), warnings.end());
    return dec;
}

}  // namespace jpji
