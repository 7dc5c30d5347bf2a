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
 * @file jithica.hpp JI-ThICA baseline: joint / individual model with a
 * single random peer tuple per extraction.
 *
 *****************************************************************************/

#pragma once

#include "jpji/jpji.hpp"
#include "jpji/types.hpp"

#include <string>
#include <vector>

namespace jpji {

struct JiThicaConfig {
    double sigma0 = 0.0;
    AlgoConfig base;  // weights, eps0, max_outer, seed

    void validate() const;
};

/// Cost matrix of one peer tuple (no sum over alpha).
CostMatrix build_m_joint(const Matrix& Zk, const PartnerRows& tuple, const std::array<double, 3>& weights);

/// Partner list is the subject's own source repeated.
CostMatrix build_m_individual(const Matrix& Zk, const RowVector& y_self, const std::array<double, 3>& weights);

/// sigma_opt of a classified decomposition divided by the number of peers.
double default_baseline_sigma0(const Decomposition& classified);

Decomposition run_ji_thica(const std::vector<std::string>& ids, const std::vector<PreprocessedSubject>& pre,
                           const JiThicaConfig& config);

Decomposition run_ji_thica(const std::vector<SubjectDataset>& datasets, const JiThicaConfig& config);

}  // namespace jpji
