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
 * @file commands.hpp Subcommands of the jpji command line tool.
 *
 *****************************************************************************/

#pragma once

#include "jpji/simgen.hpp"
#include "jpji/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace jpji::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInvalidSpec = 2,
    kValidation = 3,
    kTruthAbsent = 4,
    kEmptyReportInput = 5
};

/// Raised for conditions that map to a dedicated exit code.
class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

int exit_code_for(ErrorKind kind);

struct SimulateOptions {
    ScenarioSpec spec;
    std::filesystem::path out;
    bool binary = false;
};

struct DecomposeOptions {
    std::filesystem::path data;
    std::filesystem::path out;
    std::string algorithm = "jpji";
    AlgoConfig config;
    std::optional<double> baseline_sigma0;  // empty: derived from a JpJI-ICA run
    int threads = 0;
    bool binary = false;
};

struct ClassifyOptions {
    std::filesystem::path results;
    std::filesystem::path out;  // empty: overwrite labels in place
    std::string route = "feature";
    std::optional<double> sigma0;
    std::optional<double> tau_joint;
    std::optional<int> clusters;
    std::filesystem::path groups;  // spatial route: file with one 0/1 per subject
    std::filesystem::path data;    // spatial route: take groups from the truth clusters
    double q = 0.05;
};

struct EvaluateOptions {
    std::filesystem::path results;
    std::filesystem::path data;
    std::filesystem::path out;  // empty: <results>/report.json
};

struct ReportOptions {
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out;
};

void simulate(const SimulateOptions& o);
void decompose(const DecomposeOptions& o);
void classify(const ClassifyOptions& o);
void evaluate(const EvaluateOptions& o);
void report(const ReportOptions& o);

/// "inf" or a number.
std::optional<double> parse_snr(const std::string& s);
std::pair<int, int> parse_range(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

}  // namespace jpji::cli
