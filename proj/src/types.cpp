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
 * @file types.cpp
 *
 *****************************************************************************/

#include "jpji/types.hpp"

#include <algorithm>
#include <cmath>

namespace jpji {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MismatchedVoxelCount: return "MismatchedVoxelCount";
    case ErrorKind::NonFiniteData: return "NonFiniteData";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DegenerateSampleCount: return "DegenerateSampleCount";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::InvalidQ: return "InvalidQ";
    case ErrorKind::OrderExceedsRank: return "OrderExceedsRank";
    case ErrorKind::PartnerLengthMismatch: return "PartnerLengthMismatch";
    case ErrorKind::ZeroSource: return "ZeroSource";
    case ErrorKind::NoJointSources: return "NoJointSources";
    case ErrorKind::UnseparableFeatures: return "UnseparableFeatures";
    case ErrorKind::DegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorKind::GroupTooSmall: return "GroupTooSmall";
    case ErrorKind::RankDeficientMixing: return "RankDeficientMixing";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidLabel: return "InvalidLabel";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

const char* to_string(SourceKind kind)
{
    switch (kind) {
    case SourceKind::Joint: return "joint";
    case SourceKind::PartiallyJoint: return "partially-joint";
    case SourceKind::Individual: return "individual";
    }
    return "unknown";
}

SourceKind source_kind_from_string(const std::string& s)
{
    if (s == "joint" || s == "J") return SourceKind::Joint;
    if (s == "partially-joint" || s == "PJ") return SourceKind::PartiallyJoint;
    if (s == "individual" || s == "I") return SourceKind::Individual;
    throw Error(ErrorKind::Parse, "unknown source kind '" + s + "'");
}

SourceLabel SourceLabel::make(SourceKind kind, std::vector<int> peers, int n_subjects, int self)
{
    std::sort(peers.begin(), peers.end());
    if (std::adjacent_find(peers.begin(), peers.end()) != peers.end())
        throw Error(ErrorKind::InvalidLabel, "duplicate peer index");
    for (int p : peers) {
        if (p < 0 || p >= n_subjects || p == self)
            throw Error(ErrorKind::InvalidLabel, "peer index out of range or self");
    }
    const int n = static_cast<int>(peers.size());
    const bool ok = (kind == SourceKind::Joint && n == n_subjects - 1 && n > 0) ||
                    (kind == SourceKind::Individual && n == 0) ||
                    (kind == SourceKind::PartiallyJoint && n > 0 && n < n_subjects - 1);
    if (!ok)
        throw Error(ErrorKind::InvalidLabel, std::string("peer-set size ") + std::to_string(n) +
                                                 " inconsistent with kind " + to_string(kind));
    SourceLabel l;
    l.kind_ = kind;
    l.peers_ = std::move(peers);
    return l;
}

SourceLabel SourceLabel::joint(int n_subjects, int self)
{
    std::vector<int> peers;
    for (int j = 0; j < n_subjects; ++j)
        if (j != self) peers.push_back(j);
    return make(SourceKind::Joint, std::move(peers), n_subjects, self);
}

SourceLabel SourceLabel::individual()
{
    return SourceLabel{};
}

std::array<int, 3> GroundTruth::counts(int k) const
{
    std::array<int, 3> out{0, 0, 0};
    for (const auto& l : labels.at(k)) out[static_cast<int>(l.kind())]++;
    return out;
}

void AlgoConfig::validate() const
{
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidConfig, "weights must be >= 0");
    if (weights[0] + weights[1] + weights[2] <= 0.0)
        throw Error(ErrorKind::InvalidConfig, "at least one weight must be positive");
    if (!(eps0 > 0.0)) throw Error(ErrorKind::InvalidConfig, "eps0 must be > 0");
    if (max_outer < 1) throw Error(ErrorKind::InvalidConfig, "max_outer must be >= 1");
    if (inner_cap < 1 || max_passes < 1) throw Error(ErrorKind::InvalidConfig, "iteration caps must be >= 1");
    if (components == ComponentPolicy::Fixed && fixed_components < 1)
        throw Error(ErrorKind::InvalidConfig, "fixed component count must be >= 1");
    if (sigma0 && !(*sigma0 > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma0 must be > 0");
    if (clusters && (*clusters < 1)) throw Error(ErrorKind::InvalidConfig, "clusters must be >= 1");
}

int Decomposition::n_slots() const
{
    int c = 0;
    for (const auto& s : subjects) c = std::max(c, static_cast<int>(s.U.rows()));
    return c;
}

ValidationResult validate_analysis_input(const std::vector<SubjectDataset>& datasets,
                                         const AlgoConfig& config)
{
    config.validate();
    if (datasets.empty()) throw Error(ErrorKind::EmptyInput, "no subjects supplied");
    ValidationResult r;
    r.n_subjects = static_cast<int>(datasets.size());
    r.n_voxels = datasets.front().n_voxels();
    for (const auto& d : datasets) {
        if (d.n_voxels() != r.n_voxels)
            throw Error(ErrorKind::MismatchedVoxelCount,
                        "subject '" + d.id + "' has " + std::to_string(d.n_voxels()) + " voxels, expected " +
                            std::to_string(r.n_voxels));
        if (d.n_time() < 2 || d.n_voxels() < 2)
            throw Error(ErrorKind::EmptyInput, "subject '" + d.id + "' has fewer than 2 rows or columns");
        if (!d.observations.allFinite())
            throw Error(ErrorKind::NonFiniteData, "subject '" + d.id + "' contains non-finite values");
    }
    if (r.n_subjects == 1)
        r.warnings.push_back("single subject: joint analysis reduces to single-dataset ICA");
    else if (r.n_subjects < 5)
        r.warnings.push_back("fewer than 5 subjects: partially-joint detection with order-4 cumulants is unreliable");
    return r;
}

}  // namespace jpji
