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
 * @file typing.hpp Source-type determination (joint, partially-joint,
 * individual) and peer-set estimation.
 *
 *****************************************************************************/

#pragma once

#include "jpji/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jpji {

struct FeatureDetail {
    double value = 0.0;
    std::vector<std::array<double, 3>> contrib;  // [alpha][eta-2] = w_eta cum^2
    double deviation = 0.0;
};

/// Cost of y^(c,k) against a fresh random order of all other subjects
/// holding slot c.
FeatureDetail jpji_feature_detail(const Decomposition& dec, int c, int k, const AlgoConfig& config);
double jpji_feature(const Decomposition& dec, int c, int k, const AlgoConfig& config);

/// max over orders with positive weight of 1 - median_alpha / mean_alpha
/// (lower median for even peer counts). Orders holding under 1% of the
/// weighted mean are skipped.
double joint_deviation(const std::vector<std::array<double, 3>>& contrib, const std::array<double, 3>& weights);

/// |sum_alpha c_alpha - n c_1| / sum_alpha c_alpha.
double equality_gap(const std::vector<std::array<double, 3>>& contrib);

FeatureTable compute_features(const Decomposition& dec, const AlgoConfig& config);

/// Slots where a majority of subjects pass the joint rule.
std::vector<int> detect_joint_slots(const FeatureTable& f, const AlgoConfig& config);

struct SigmaSelection {
    double sigma = 0.0;
    double joint_mean = 0.0;
    std::vector<double> ratio;  // per slot, NaN for joint slots
    std::vector<int> pj_slots;
    std::vector<int> i_slots;
    std::string method;
};

/// Ratio / two-cluster / midpoint threshold. jpjif_by_slot[c] holds the
/// features of all subjects for slot c. Throws NoJointSources or
/// UnseparableFeatures.
SigmaSelection select_sigma_opt(const std::vector<std::vector<double>>& jpjif_by_slot,
                                const std::vector<int>& joint_slots, std::uint64_t seed = 0);

/// Largest gap (>= 2 decades) between sorted features; throws
/// UnseparableFeatures when none exists.
double sigma_from_gap(std::vector<double> values);

/// sigma_opt with the documented fallbacks; never throws on separable input.
SigmaSelection select_sigma(const FeatureTable& f, const std::vector<int>& joint_slots, const AlgoConfig& config,
                            std::vector<std::string>* warnings = nullptr);

/// Joint if the alpha profile is flat and the feature exceeds sigma,
/// Individual if feature <= sigma, PartiallyJoint otherwise.
std::vector<std::vector<SourceKind>> classify_by_feature(const FeatureTable& f, double sigma, double tau_joint);

/// Peer sets: PJ subjects of a slot are clustered on their |corr| rows.
std::vector<std::vector<SourceLabel>> cluster_subjects(const Decomposition& dec,
                                                       const std::vector<std::vector<SourceKind>>& kinds,
                                                       std::optional<int> clusters, std::uint64_t seed);

struct SpatialSlotResult {
    SourceKind verdict = SourceKind::Joint;
    std::vector<bool> mask;  // between-group discoveries
    int discoveries = 0;
    int common = 0;  // one-sample discoveries, set when discoveries == 0
    std::vector<std::vector<bool>> subgroup_masks;
};

/// groups[k] in {0, 1}. Voxelwise Welch test between groups with BH-FDR at q,
/// keeping voxels whose mean difference reaches one map standard deviation.
/// No discoveries: a one-sample test on the mean map decides Joint against
/// Individual. Otherwise one median-split level inside each group decides
/// PartiallyJoint against Individual.
std::vector<SpatialSlotResult> classify_by_spatial(const Decomposition& dec, const std::vector<int>& groups, double q);

struct KurtosisPoint {
    int slot = 0;
    int subject = 0;
    double kurtosis = 0.0;
    double jpjif = 0.0;
    SourceKind kind = SourceKind::Individual;
};

struct KurtosisDiagnostic {
    std::vector<KurtosisPoint> points;
    double a = 0.0;  // jpjif ~ a * kurt^2 + b over joint points
    double b = 0.0;
    double r2 = 0.0;
    std::vector<std::string> warnings;
};

KurtosisDiagnostic kurtosis_feature_diagnostic(const Decomposition& dec);

/// Fills dec.features and dec.labels.
void classify_decomposition(Decomposition& dec, const AlgoConfig& config);

}  // namespace jpji
