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
 * @file typing.cpp
 *
 *****************************************************************************/

#include "jpji/typing.hpp"

#include "jpji/jpji.hpp"
#include "jpji/numerics.hpp"
#include "jpji/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace jpji {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOrderShare = 0.01;
constexpr double kEffectFloor = 1.0;  // in map standard deviations

int slots_of(const Decomposition& dec, int k)
{
    return static_cast<int>(dec.subjects[static_cast<std::size_t>(k)].Y.rows());
}

FeatureDetail feature_from_rows(const RowVector& y, const std::vector<const RowVector*>& peers_in_order,
                                const std::array<double, 3>& weights)
{
    FeatureDetail d;
    if (peers_in_order.empty()) {
        d.deviation = 1.0;
        return d;
    }
    Matrix Y1(1, y.size());
    Y1.row(0) = y;
    const CostMatrix M = build_cost_matrix(Y1, peers_in_order, weights);
    for (int a = 0; a < M.n_alpha(); ++a) {
        std::array<double, 3> c{};
        for (int e = 2; e <= 4; ++e) c[e - 2] = M.contribution(a, e);
        d.contrib.push_back(c);
        d.value += c[0] + c[1] + c[2];
    }
    d.deviation = joint_deviation(d.contrib, weights);
    return d;
}

std::vector<std::vector<RowVector>> standardized_sources(const Decomposition& dec)
{
    std::vector<std::vector<RowVector>> Y(dec.subjects.size());
    for (std::size_t k = 0; k < dec.subjects.size(); ++k)
        for (Eigen::Index c = 0; c < dec.subjects[k].Y.rows(); ++c) {
            const RowVector r = dec.subjects[k].Y.row(c);
            Y[k].push_back(standardize(r));
        }
    return Y;
}

FeatureDetail feature_detail_std(const std::vector<std::vector<RowVector>>& Y, int c, int k, const AlgoConfig& config)
{
    const int K = static_cast<int>(Y.size());
    std::vector<int> holders;
    for (int j = 0; j < K; ++j)
        if (j != k && static_cast<int>(Y[j].size()) > c) holders.push_back(j);
    Rng rng(split_seed(config.seed, {tag::feature, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(k)}));
    const PeerOrder order = PeerOrder::random(holders, rng);
    std::vector<const RowVector*> rows;
    for (int j : order.order) rows.push_back(&Y[j][c]);
    return feature_from_rows(Y[k][c], rows, config.weights);
}

double median(std::vector<double> v)
{
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double joint_deviation(const std::vector<std::array<double, 3>>& contrib, const std::array<double, 3>& weights)
{
    if (contrib.empty()) return 1.0;
    const double n = static_cast<double>(contrib.size());
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    for (const auto& c : contrib)
        for (int e = 0; e < 3; ++e) mean[e] += c[e] / n;
    double total = 0.0;
    for (int e = 0; e < 3; ++e)
        if (weights[e] > 0.0) total += weights[e] * std::abs(mean[e]);

    double dev = 0.0;
    bool any = false;
    std::vector<double> v(contrib.size());
    for (int e = 0; e < 3; ++e) {
        if (!(weights[e] > 0.0)) continue;
        // orders carrying almost none of the feature are noise-dominated
        if (total > 0.0 && weights[e] * std::abs(mean[e]) < kOrderShare * total) continue;
        any = true;
        for (std::size_t a = 0; a < contrib.size(); ++a) v[a] = contrib[a][e];
        const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
        std::nth_element(v.begin(), mid, v.end());
        dev = std::max(dev, mean[e] > 0.0 ? 1.0 - *mid / mean[e] : 1.0);
    }
    return any ? dev : 1.0;
}

double equality_gap(const std::vector<std::array<double, 3>>& contrib)
{
    if (contrib.empty()) return 1.0;
    double total = 0.0;
    for (const auto& c : contrib) total += c[0] + c[1] + c[2];
    const double first = contrib.front()[0] + contrib.front()[1] + contrib.front()[2];
    if (!(total > 0.0)) return 1.0;
    return std::abs(total - static_cast<double>(contrib.size()) * first) / total;
}

FeatureDetail jpji_feature_detail(const Decomposition& dec, int c, int k, const AlgoConfig& config)
{
    if (k < 0 || k >= dec.n_subjects() || c < 0 || c >= slots_of(dec, k))
        throw Error(ErrorKind::OrderOutOfRange, "feature index out of range");
    return feature_detail_std(standardized_sources(dec), c, k, config);
}

double jpji_feature(const Decomposition& dec, int c, int k, const AlgoConfig& config)
{
    return jpji_feature_detail(dec, c, k, config).value;
}

FeatureTable compute_features(const Decomposition& dec, const AlgoConfig& config)
{
    const int K = dec.n_subjects();
    const auto Y = standardized_sources(dec);
    FeatureTable f;
    f.jpjif.resize(static_cast<std::size_t>(K));
    f.contrib.resize(static_cast<std::size_t>(K));
    f.deviation.resize(static_cast<std::size_t>(K));
    std::vector<std::pair<int, int>> jobs;
    for (int k = 0; k < K; ++k) {
        const int C = static_cast<int>(Y[k].size());
        f.jpjif[k].assign(static_cast<std::size_t>(C), 0.0);
        f.contrib[k].resize(static_cast<std::size_t>(C));
        f.deviation[k].assign(static_cast<std::size_t>(C), 1.0);
        for (int c = 0; c < C; ++c) jobs.emplace_back(k, c);
    }
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto [k, c] = jobs[i];
        FeatureDetail d = feature_detail_std(Y, c, k, config);
        f.jpjif[k][c] = d.value;
        f.deviation[k][c] = d.deviation;
        f.contrib[k][c] = std::move(d.contrib);
    }
    f.ratio.assign(static_cast<std::size_t>(dec.n_slots()), kNaN);
    return f;
}

std::vector<int> detect_joint_slots(const FeatureTable& f, const AlgoConfig& config)
{
    int cmax = 0;
    for (const auto& row : f.jpjif) cmax = std::max(cmax, static_cast<int>(row.size()));
    std::vector<int> slots;
    for (int c = 0; c < cmax; ++c) {
        int present = 0, pass = 0;
        for (std::size_t k = 0; k < f.jpjif.size(); ++k) {
            if (static_cast<int>(f.jpjif[k].size()) <= c) continue;
            ++present;
            if (f.deviation[k][c] <= config.tau_joint && f.jpjif[k][c] > config.sigma_null) ++pass;
        }
        if (present > 0 && 2 * pass > present) slots.push_back(c);
    }
    return slots;
}

SigmaSelection select_sigma_opt(const std::vector<std::vector<double>>& jpjif_by_slot,
                                const std::vector<int>& joint_slots, std::uint64_t seed)
{
    if (joint_slots.empty()) throw Error(ErrorKind::NoJointSources, "no joint slots identified");
    const int C = static_cast<int>(jpjif_by_slot.size());
    const std::set<int> joint(joint_slots.begin(), joint_slots.end());
    SigmaSelection s;
    s.ratio.assign(static_cast<std::size_t>(C), kNaN);

    double jsum = 0.0;
    int jn = 0;
    for (int c : joint_slots)
        for (double v : jpjif_by_slot.at(static_cast<std::size_t>(c))) {
            jsum += v;
            ++jn;
        }
    if (jn == 0) throw Error(ErrorKind::NoJointSources, "joint slots carry no features");
    s.joint_mean = jsum / jn;

    std::vector<int> nonjoint;
    std::vector<Vector> pts;
    for (int c = 0; c < C; ++c) {
        const auto& v = jpjif_by_slot[static_cast<std::size_t>(c)];
        if (joint.count(c) || v.empty()) continue;
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        const double r = mean > 0.0 ? s.joint_mean / mean : std::numeric_limits<double>::max();
        s.ratio[static_cast<std::size_t>(c)] = r;
        nonjoint.push_back(c);
        Vector p(1);
        p(0) = std::log10(std::max(r, std::numeric_limits<double>::min()));
        pts.push_back(p);
    }
    if (nonjoint.size() < 2) throw Error(ErrorKind::UnseparableFeatures, "fewer than two non-joint slots");

    KMeansResult km;
    try {
        km = kmeans(pts, 2, seed);
    } catch (const Error&) {
        throw Error(ErrorKind::UnseparableFeatures, "ratios form a single class");
    }
    const double c0 = km.centroids[0](0), c1 = km.centroids[1](0);
    if (std::abs(c0 - c1) < 2.0) throw Error(ErrorKind::UnseparableFeatures, "ratio clusters less than 2 decades apart");
    const int pj_cluster = c0 < c1 ? 0 : 1;

    double lb = -std::numeric_limits<double>::infinity();
    double ub = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nonjoint.size(); ++i) {
        const int c = nonjoint[i];
        const auto& v = jpjif_by_slot[static_cast<std::size_t>(c)];
        if (km.assignment[i] == pj_cluster) {
            s.pj_slots.push_back(c);
            ub = std::min(ub, *std::min_element(v.begin(), v.end()));
        } else {
            s.i_slots.push_back(c);
            lb = std::max(lb, *std::max_element(v.begin(), v.end()));
        }
    }
    if (!(lb < ub)) throw Error(ErrorKind::UnseparableFeatures, "InvertedBounds: individual features reach the partially-joint range");
    s.sigma = 0.5 * (lb + ub);
    s.method = "ratio-kmeans";
    return s;
}

double sigma_from_gap(std::vector<double> values)
{
    std::erase_if(values, [](double v) { return !(v > 0.0); });
    if (values.size() < 2) throw Error(ErrorKind::UnseparableFeatures, "not enough positive features for a gap");
    std::sort(values.begin(), values.end());
    double best = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double g = std::log10(values[i]) - std::log10(values[i - 1]);
        if (g > best) {
            best = g;
            at = i;
        }
    }
    if (best < 2.0) throw Error(ErrorKind::UnseparableFeatures, "no gap of two decades between features");
    return 0.5 * (values[at - 1] + values[at]);
}

SigmaSelection select_sigma(const FeatureTable& f, const std::vector<int>& joint_slots, const AlgoConfig& config,
                            std::vector<std::string>* warnings)
{
    int cmax = 0;
    for (const auto& row : f.jpjif) cmax = std::max(cmax, static_cast<int>(row.size()));
    std::vector<std::vector<double>> by_slot(static_cast<std::size_t>(cmax));
    for (const auto& row : f.jpjif)
        for (std::size_t c = 0; c < row.size(); ++c) by_slot[c].push_back(row[c]);

    try {
        return select_sigma_opt(by_slot, joint_slots, config.seed);
    } catch (const Error& e) {
        if (warnings) warnings->push_back(std::string("sigma_opt fallback: ") + e.what());
    }

    SigmaSelection s;
    s.ratio.assign(static_cast<std::size_t>(cmax), kNaN);
    const std::set<int> joint(joint_slots.begin(), joint_slots.end());
    std::vector<double> values;
    for (int c = 0; c < cmax; ++c)
        if (!joint.count(c)) values.insert(values.end(), by_slot[c].begin(), by_slot[c].end());
    if (values.empty()) {
        s.sigma = config.sigma_null;
        s.method = "null";
        return s;
    }
    try {
        s.sigma = sigma_from_gap(values);
        s.method = "gap";
        return s;
    } catch (const Error&) {
    }
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    if (median(values) < config.sigma_null) {
        s.sigma = std::max(10.0 * hi, config.sigma_null);
        s.method = "single-class-individual";
    } else {
        s.sigma = lo / 10.0;
        s.method = "single-class-partially-joint";
    }
    if (!(s.sigma > 0.0)) s.sigma = config.sigma_null;
    return s;
}

std::vector<std::vector<SourceKind>> classify_by_feature(const FeatureTable& f, double sigma, double tau_joint)
{
    if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be > 0");
    std::vector<std::vector<SourceKind>> kinds(f.jpjif.size());
    for (std::size_t k = 0; k < f.jpjif.size(); ++k)
        for (std::size_t c = 0; c < f.jpjif[k].size(); ++c) {
            const double v = f.jpjif[k][c];
            SourceKind kind;
            if (v <= sigma)
                kind = SourceKind::Individual;
            else if (f.deviation[k][c] <= tau_joint)
                kind = SourceKind::Joint;
            else
                kind = SourceKind::PartiallyJoint;
            kinds[k].push_back(kind);
        }
    return kinds;
}

std::vector<std::vector<SourceLabel>> cluster_subjects(const Decomposition& dec,
                                                       const std::vector<std::vector<SourceKind>>& kinds,
                                                       std::optional<int> clusters, std::uint64_t seed)
{
    const int K = dec.n_subjects();
    std::vector<std::vector<SourceLabel>> labels(static_cast<std::size_t>(K));
    int cmax = 0;
    for (int k = 0; k < K; ++k) {
        labels[k].resize(kinds.at(k).size());
        cmax = std::max(cmax, static_cast<int>(kinds[k].size()));
        for (std::size_t c = 0; c < kinds[k].size(); ++c) {
            if (kinds[k][c] == SourceKind::Joint) labels[k][c] = K > 1 ? SourceLabel::joint(K, k) : SourceLabel::individual();
        }
    }

    for (int c = 0; c < cmax; ++c) {
        std::vector<int> S;
        for (int k = 0; k < K; ++k)
            if (static_cast<int>(kinds[k].size()) > c && kinds[k][c] == SourceKind::PartiallyJoint) S.push_back(k);
        const int n = static_cast<int>(S.size());
        if (n == 0) continue;

        std::vector<int> assign(static_cast<std::size_t>(n), 0);
        if (n >= 2) {
            Matrix corr = Matrix::Identity(n, n);
            double minc = 1.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double r = std::abs(correlation(dec.subjects[S[i]].Y.row(c), dec.subjects[S[j]].Y.row(c)));
                    corr(i, j) = corr(j, i) = r;
                    minc = std::min(minc, r);
                }
            std::vector<Vector> pts;
            for (int i = 0; i < n; ++i) pts.push_back(corr.row(i).transpose());
            std::vector<int> ks;
            if (clusters)
                ks = {std::min(*clusters, n)};
            else if (!(minc > 0.5))
                ks = {2, 3};
            const std::uint64_t ks_seed = split_seed(seed, {tag::cluster, static_cast<std::uint64_t>(c)});
            double best = -std::numeric_limits<double>::infinity();
            for (int kk : ks) {
                if (kk <= 1) break;
                if (kk > n) continue;
                KMeansResult km;
                try {
                    km = kmeans(pts, kk, ks_seed);
                } catch (const Error&) {
                    continue;
                }
                const double sil = kk < n ? silhouette(pts, km.assignment) : 0.0;
                if (sil > best + 1e-12) {
                    best = sil;
                    assign = km.assignment;
                }
            }
        }

        const int ncl = *std::max_element(assign.begin(), assign.end()) + 1;
        for (int g = 0; g < ncl; ++g) {
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (assign[i] == g) members.push_back(S[i]);
            for (int k : members) {
                std::vector<int> peers;
                for (int j : members)
                    if (j != k) peers.push_back(j);
                SourceLabel l;
                if (peers.empty())
                    l = SourceLabel::individual();
                else if (static_cast<int>(peers.size()) == K - 1)
                    l = SourceLabel::joint(K, k);
                else
                    l = SourceLabel::make(SourceKind::PartiallyJoint, peers, K, k);
                labels[k][c] = l;
            }
        }
    }
    return labels;
}

namespace {

/// BH discoveries of a voxelwise Welch test whose group-mean difference is
/// at least min_effect.
std::vector<bool> voxel_test(const std::vector<RowVector>& ga, const std::vector<RowVector>& gb, double q,
                             double min_effect)
{
    const Eigen::Index V = ga.front().size();
    std::vector<double> p(static_cast<std::size_t>(V), 1.0);
    std::vector<double> effect(static_cast<std::size_t>(V), 0.0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index v = 0; v < V; ++v) {
        std::vector<double> a, b;
        for (const auto& r : ga) a.push_back(r(v));
        for (const auto& r : gb) b.push_back(r(v));
        p[static_cast<std::size_t>(v)] = two_sample_t_test(a, b).p;
        const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
        const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
        effect[static_cast<std::size_t>(v)] = std::abs(ma - mb);
    }
    std::vector<bool> m = bh_fdr(p, q);
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = m[v] && effect[v] >= min_effect;
    return m;
}

/// Same for a one-sample test of a zero mean.
std::vector<bool> mean_test(const std::vector<RowVector>& g, double q, double min_effect)
{
    const Eigen::Index V = g.front().size();
    const double n = static_cast<double>(g.size());
    std::vector<double> p(static_cast<std::size_t>(V), 1.0);
    std::vector<double> effect(static_cast<std::size_t>(V), 0.0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index v = 0; v < V; ++v) {
        double m = 0.0;
        for (const auto& r : g) m += r(v) / n;
        double ss = 0.0;
        for (const auto& r : g) ss += (r(v) - m) * (r(v) - m);
        const double se = std::sqrt(ss / (n - 1.0) / n);
        double t = se > 0.0 ? m / se : (m != 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (m < 0.0 && std::isinf(t)) t = -t;
        p[static_cast<std::size_t>(v)] = student_t_two_sided(t, n - 1.0);
        effect[static_cast<std::size_t>(v)] = std::abs(m);
    }
    std::vector<bool> m = bh_fdr(p, q);
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = m[v] && effect[v] >= min_effect;
    return m;
}

double median_of(std::vector<double> x)
{
    const std::size_t h = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(h), x.end());
    const double hi = x[h];
    if (x.size() % 2) return hi;
    return 0.5 * (hi + *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(h)));
}

/// Median-centred, MAD-scaled copy. A localized group effect barely moves
/// either statistic, so it does not rescale the rest of the map.
RowVector robust_standardize(const RowVector& x)
{
    std::vector<double> v(x.data(), x.data() + x.size());
    const double med = median_of(v);
    for (double& e : v) e = std::abs(e - med);
    double mad = median_of(v);
    if (!(mad > 0.0)) return standardize(x);
    return (x.array() - med) / mad;
}

int count(const std::vector<bool>& m)
{
    return static_cast<int>(std::count(m.begin(), m.end(), true));
}

}  // namespace

std::vector<SpatialSlotResult> classify_by_spatial(const Decomposition& dec, const std::vector<int>& groups, double q)
{
    const int K = dec.n_subjects();
    if (static_cast<int>(groups.size()) != K) throw Error(ErrorKind::GroupTooSmall, "one group index per subject required");
    std::array<std::vector<int>, 2> members;
    for (int k = 0; k < K; ++k) {
        if (groups[k] != 0 && groups[k] != 1) throw Error(ErrorKind::GroupTooSmall, "group indices must be 0 or 1");
        members[groups[k]].push_back(k);
    }
    if (members[0].size() < 2 || members[1].size() < 2)
        throw Error(ErrorKind::GroupTooSmall, "each group needs at least 2 subjects");

    int cmin = std::numeric_limits<int>::max();
    for (const auto& s : dec.subjects) cmin = std::min(cmin, static_cast<int>(s.Y.rows()));
    std::vector<SpatialSlotResult> out(static_cast<std::size_t>(cmin));
    for (int c = 0; c < cmin; ++c) {
        const RowVector ref = dec.subjects[members[0][0]].Y.row(c);
        std::vector<RowVector> y(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            RowVector r = robust_standardize(dec.subjects[k].Y.row(c));
            if (correlation(r, ref) < 0) r = -r;
            y[k] = r;
        }
        auto rows = [&](const std::vector<int>& idx) {
            std::vector<RowVector> v;
            for (int k : idx) v.push_back(y[k]);
            return v;
        };
        std::vector<double> sd;
        for (const auto& r : y) sd.push_back(std::sqrt((r.array() - r.mean()).square().mean()));
        const double floor = kEffectFloor * median_of(sd);

        SpatialSlotResult& res = out[c];
        res.mask = voxel_test(rows(members[0]), rows(members[1]), q, floor);
        res.discoveries = count(res.mask);
        if (res.discoveries == 0) {
            res.common = count(mean_test(y, q, floor));
            res.verdict = res.common > 0 ? SourceKind::Joint : SourceKind::Individual;
            continue;
        }
        bool within = false;
        for (const auto& g : members) {
            const std::size_t half = g.size() / 2;
            std::vector<int> lo(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(half));
            std::vector<int> hi(g.begin() + static_cast<std::ptrdiff_t>(half), g.end());
            if (lo.size() < 2 || hi.size() < 2) continue;
            std::vector<bool> m = voxel_test(rows(lo), rows(hi), q, floor);
            within = within || count(m) > 0;
            res.subgroup_masks.push_back(std::move(m));
        }
        res.verdict = within ? SourceKind::Individual : SourceKind::PartiallyJoint;
    }
    return out;
}

KurtosisDiagnostic kurtosis_feature_diagnostic(const Decomposition& dec)
{
    KurtosisDiagnostic d;
    const bool have_labels = static_cast<int>(dec.labels.size()) == dec.n_subjects();
    for (int k = 0; k < dec.n_subjects(); ++k)
        for (int c = 0; c < slots_of(dec, k); ++c) {
            const double kurt = excess_kurtosis(dec.subjects[k].Y.row(c));
            if (!std::isfinite(kurt)) {
                d.warnings.push_back("slot " + std::to_string(c) + " subject " + std::to_string(k) +
                                     ": constant source, kurtosis undefined");
                continue;
            }
            KurtosisPoint p;
            p.slot = c;
            p.subject = k;
            p.kurtosis = kurt;
            p.jpjif = k < static_cast<int>(dec.features.jpjif.size()) &&
                              c < static_cast<int>(dec.features.jpjif[k].size())
                          ? dec.features.jpjif[k][c]
                          : kNaN;
            if (have_labels) p.kind = dec.labels[k][c].kind();
            d.points.push_back(p);
        }
    std::vector<const KurtosisPoint*> joint;
    for (const auto& p : d.points)
        if (p.kind == SourceKind::Joint && std::isfinite(p.jpjif)) joint.push_back(&p);
    if (joint.size() < 3) {
        d.warnings.push_back("fewer than 3 joint points, no fit");
        return d;
    }
    Eigen::MatrixXd A(joint.size(), 2);
    Eigen::VectorXd b(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) {
        A(i, 0) = joint[i]->kurtosis * joint[i]->kurtosis;
        A(i, 1) = 1.0;
        b(i) = joint[i]->jpjif;
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    d.a = x(0);
    d.b = x(1);
    const double ss_res = (A * x - b).squaredNorm();
    const double ss_tot = (b.array() - b.mean()).square().sum();
    d.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return d;
}

void classify_decomposition(Decomposition& dec, const AlgoConfig& config)
{
    FeatureTable f = compute_features(dec, config);
    f.joint_slots = detect_joint_slots(f, config);
    double jsum = 0.0;
    int jn = 0;
    for (int c : f.joint_slots)
        for (const auto& row : f.jpjif)
            if (c < static_cast<int>(row.size())) {
                jsum += row[c];
                ++jn;
            }
    f.jpjif_joint_mean = jn > 0 ? jsum / jn : 0.0;
    if (config.sigma0) {
        f.sigma_opt = *config.sigma0;
        f.sigma_method = "fixed";
    } else {
        const SigmaSelection s = select_sigma(f, f.joint_slots, config, &dec.warnings);
        f.sigma_opt = s.sigma;
        f.sigma_method = s.method;
        if (!s.ratio.empty()) f.ratio = s.ratio;
    }
    const auto kinds = classify_by_feature(f, f.sigma_opt, config.tau_joint);
    dec.labels = cluster_subjects(dec, kinds, config.clusters, config.seed);
    dec.features = std::move(f);
}

}  // namespace jpji
