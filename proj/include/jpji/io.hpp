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
 * @file io.hpp Matrix files (CSV and raw binary) and the dataset manifest.
 *
 *****************************************************************************/

#pragma once

#include "jpji/simgen.hpp"
#include "jpji/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace jpji::io {

enum class MatrixFormat { Csv, Binary };

/// Row-major CSV, no header, 17 significant digits.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& M);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// "JPJI", u32 rows, u32 cols, u32 reserved, then little-endian float64.
void write_matrix_binary(const std::filesystem::path& path, const Matrix& M);
Matrix read_matrix_binary(const std::filesystem::path& path);

/// Picks the format from the extension (.bin is binary).
void write_matrix(const std::filesystem::path& path, const Matrix& M);
Matrix read_matrix(const std::filesystem::path& path);

std::string matrix_extension(MatrixFormat f);

/// Shortest round-trip decimal for doubles (17 significant digits max).
std::string format_double(double v);
double parse_double(const std::string& s);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

struct LoadedDataset {
    std::vector<SubjectDataset> datasets;
    std::optional<GroundTruth> truth;
    nlohmann::json manifest;
};

nlohmann::json spec_to_json(const ScenarioSpec& spec);

/// manifest.json plus one observation file per subject and, when present,
/// truth/S_<id> and truth/A_<id>.
void write_dataset(const std::filesystem::path& dir, const SimulatedData& data, const ScenarioSpec& spec,
                   MatrixFormat format);
LoadedDataset read_dataset(const std::filesystem::path& dir);

nlohmann::json label_to_json(const SourceLabel& l, const std::vector<std::string>& ids);
SourceLabel label_from_json(const nlohmann::json& j, const std::vector<std::string>& ids, int self);

std::string peers_to_string(const SourceLabel& l, const std::vector<std::string>& ids);

nlohmann::json config_to_json(const AlgoConfig& c);
AlgoConfig config_from_json(const nlohmann::json& j);

struct ResultsFiles {
    Decomposition dec;  // pre.Z is empty until attach_observations
    AlgoConfig config;
    nlohmann::json run_config;
};

/// U_<id>, Y_<id>, W_<id>, mean_<id>, features.csv, labels.csv,
/// cost_trace.csv, snapshots/ and run_config.json.
void write_results(const std::filesystem::path& dir, const Decomposition& dec, const AlgoConfig& config,
                   MatrixFormat format, const nlohmann::json& extra = nlohmann::json::object());
ResultsFiles read_results(const std::filesystem::path& dir);
void write_labels_csv(const std::filesystem::path& path, const Decomposition& dec);
void write_features_csv(const std::filesystem::path& path, const Decomposition& dec);

/// Rebuilds Z = W (O - mean) for every subject from the original data.
void attach_observations(Decomposition& dec, const std::vector<SubjectDataset>& datasets);

}  // namespace jpji::io
