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
 * @file types.hpp Shared data model: datasets, labels, configuration and
 * decomposition results.
 *
 *****************************************************************************/

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jpji {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

enum class ErrorKind {
    EmptyInput,
    MismatchedVoxelCount,
    NonFiniteData,
    LengthMismatch,
    OrderOutOfRange,
    NotSymmetric,
    NonFinite,
    DegenerateSampleCount,
    SingularCovariance,
    TooFewPoints,
    InsufficientSamples,
    InvalidQ,
    OrderExceedsRank,
    PartnerLengthMismatch,
    ZeroSource,
    NoJointSources,
    UnseparableFeatures,
    DegenerateCorrelation,
    GroupTooSmall,
    RankDeficientMixing,
    InvalidSpec,
    InvalidConfig,
    InvalidLabel,
    Io,
    Parse
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// One subject's observation matrix O (time x voxels).
struct SubjectDataset {
    std::string id;
    Matrix observations;

    int n_time() const { return static_cast<int>(observations.rows()); }
    int n_voxels() const { return static_cast<int>(observations.cols()); }
};

enum class SourceKind { Joint, PartiallyJoint, Individual };

const char* to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& s);

/// Source type plus the set of other subjects sharing the source. Peer
/// indices are 0-based subject positions, sorted, never containing self.
class SourceLabel {
public:
    SourceLabel() = default;

    static SourceLabel make(SourceKind kind, std::vector<int> peers, int n_subjects, int self);
    static SourceLabel joint(int n_subjects, int self);
    static SourceLabel individual();

    SourceKind kind() const { return kind_; }
    const std::vector<int>& peers() const { return peers_; }

    bool operator==(const SourceLabel& o) const = default;

private:
    SourceKind kind_ = SourceKind::Individual;
    std::vector<int> peers_;
};

struct GroundTruth {
    std::vector<Matrix> sources;                       // per subject, C x V
    std::vector<Matrix> mixing;                        // per subject, N x C
    std::vector<std::vector<SourceLabel>> labels;      // [k][c]
    std::vector<std::vector<int>> map_ids;             // [k][c], shared maps share ids
    int joint_count = 0;
    std::vector<int> pjoint_counts;
    std::vector<int> individual_counts;
    std::vector<int> cluster_of;                       // cluster index per subject

    int n_subjects() const { return static_cast<int>(sources.size()); }
    std::array<int, 3> counts(int k) const;
};

enum class ComponentPolicy { GlobalMin, Auto, Fixed };

enum class CostEstimator { SampleCumulant, PerVoxel };

struct AlgoConfig {
    std::array<double, 3> weights{0.5, 0.75, 1.0};
    int max_outer = 5;
    double eps0 = 1e-6;
    ComponentPolicy components = ComponentPolicy::GlobalMin;
    int fixed_components = 0;
    int c_max = 0;                                     // 0: min(N-1, 64)
    std::uint64_t seed = 0;
    std::optional<double> sigma0;                      // empty: sigma_opt procedure
    std::optional<double> noise_snr_db;

    int inner_cap = 200;
    int max_passes = 50;
    double pass_tol = 1e-6;
    double self_threshold = 0.05;
    double tau_joint = 0.15;
    double sigma_null = 0.1;
    std::optional<int> clusters;                       // empty: silhouette over {2,3}
    CostEstimator estimator = CostEstimator::SampleCumulant;
    bool record_snapshots = false;
    bool classify = true;

    void validate() const;
};

struct PreprocessedSubject {
    Matrix Z;        // C x V, white, zero row means
    Matrix W_total;  // C x N, maps centered observations to Z
    Vector mean;     // row means of the observations (length N)
    int C = 0;
    double retained_variance = 0.0;
};

enum class ExtractMode { Peer, Self };

struct InnerTrace {
    int sweep = 0;
    int slot = 0;
    int subject = 0;
    int pass = 0;
    ExtractMode mode = ExtractMode::Peer;
    bool converged = true;
    std::vector<double> costs;
};

struct FeatureTable {
    std::vector<std::vector<double>> jpjif;                                 // [k][c]
    std::vector<std::vector<std::vector<std::array<double, 3>>>> contrib;  // [k][c][alpha][eta-2]
    std::vector<std::vector<double>> deviation;                             // [k][c]
    std::vector<double> ratio;                                              // per slot, NaN if unused
    std::vector<int> joint_slots;
    double sigma_opt = 0.0;
    double jpjif_joint_mean = 0.0;
    std::string sigma_method;
};

struct Snapshot {
    int sweep = 0;
    std::vector<Matrix> U;
};

struct SubjectResult {
    PreprocessedSubject pre;
    Matrix U;  // C x C, unit rows
    Matrix Y;  // C x V
};

struct Decomposition {
    std::string algorithm = "jpji";
    std::vector<std::string> subject_ids;
    std::vector<SubjectResult> subjects;
    FeatureTable features;
    std::vector<std::vector<SourceLabel>> labels;  // [k][c]
    std::vector<InnerTrace> traces;
    std::vector<Snapshot> snapshots;
    std::vector<std::vector<double>> final_cost;   // [k][c]
    std::vector<std::string> warnings;
    int sweeps_run = 0;

    int n_subjects() const { return static_cast<int>(subjects.size()); }
    int n_slots() const;
};

struct ValidationResult {
    int n_subjects = 0;
    int n_voxels = 0;
    std::vector<std::string> warnings;
};

ValidationResult validate_analysis_input(const std::vector<SubjectDataset>& datasets,
                                         const AlgoConfig& config);

}  // namespace jpji
