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
 * @file test_cli.cpp
 *
 *****************************************************************************/

#include "jpji/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;
using namespace jpji;

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string(JPJI_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// One small dataset shared by the suite: K=6, two joint, one individual.
class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        root_ = fs::temp_directory_path() / "jpji_cli_tests";
        fs::remove_all(root_);
        fs::create_directories(root_);
        ASSERT_EQ(run("simulate --out " + data().string() +
                      " --subjects 6 --joint 2 --pjoint 0 --individual 1 --clusters 1 --voxels 1024 --time 40 --seed 3"),
                  0);
    }
    static void TearDownTestSuite() { fs::remove_all(root_); }

    static fs::path data() { return root_ / "data"; }
    static fs::path dir(const std::string& name) { return root_ / name; }

    static fs::path root_;
};

fs::path Cli::root_;

}  // namespace

TEST_F(Cli, SimulateWritesManifestAndTruth)
{
    EXPECT_TRUE(fs::exists(data() / "manifest.json"));
    EXPECT_TRUE(fs::exists(data() / "sub-01.csv"));
    EXPECT_TRUE(fs::exists(data() / "truth" / "S_sub-06.csv"));
    const auto m = io::read_json(data() / "manifest.json");
    EXPECT_EQ(m.at("n_subjects"), 6);
    EXPECT_EQ(m.at("ground_truth").at("joint_count"), 2);
}

TEST_F(Cli, SnrAliasAndBinary)
{
    const fs::path d = dir("noisy");
    ASSERT_EQ(run("simulate --out " + d.string() +
                  " --subjects 6 --joint 2 --pjoint 0 --individual 1 --clusters 1 --voxels 256 --time 30 --snr-db 3 --binary"),
              0);
    EXPECT_TRUE(fs::exists(d / "sub-01.bin"));
    EXPECT_EQ(io::read_json(d / "manifest.json").at("spec").at("snr_db"), 3.0);
}

TEST_F(Cli, InvalidSpecExitsTwo)
{
    // three clusters of ten subjects leave clusters smaller than five
    EXPECT_EQ(run("simulate --out " + dir("bad").string() + " --subjects 10 --clusters 3 --pjoint 2"), 2);
    EXPECT_EQ(run("simulate --out " + dir("bad").string() + " --subjects notanumber"), 2);
    EXPECT_EQ(run("decompose --data " + data().string() + " --out " + dir("bad").string() + " --max-outer 0"), 2);
    EXPECT_EQ(run("decompose --data " + data().string() + " --out " + dir("bad").string() + " --algorithm foo"), 2);
}

TEST_F(Cli, DecomposeEvaluateReport)
{
    const fs::path res = dir("res");
    ASSERT_EQ(run("decompose --data " + data().string() + " --out " + res.string() + " --seed 3 --max-outer 3"), 0);
    for (const char* f : {"U_sub-01.csv", "Y_sub-06.csv", "features.csv", "labels.csv", "cost_trace.csv",
                          "run_config.json", "snapshots/sweep3_U_sub-01.csv"})
        EXPECT_TRUE(fs::exists(res / f)) << f;
    EXPECT_EQ(io::read_text(res / "features.csv").substr(0, 30), "slot,subject,jpjif,deviation\n0");

    ASSERT_EQ(run("evaluate --results " + res.string() + " --data " + data().string()), 0);
    const auto rep = io::read_json(res / "report.json");
    EXPECT_GT(rep.at("jsir_db").get<double>(), 15.0);
    EXPECT_TRUE(rep.at("counts_ok").at("joint").get<bool>());
    EXPECT_TRUE(rep.at("counts_ok").at("individual").get<bool>());
    EXPECT_EQ(rep.at("per_sweep").size(), 3u);

    const fs::path tables = dir("tables");
    ASSERT_EQ(run("report " + res.string() + " --out " + tables.string()), 0);
    for (const char* f : {"convergence.csv", "vs_k.csv", "vs_snr.csv", "algorithm_comparison.csv",
                          "kurtosis_scatter.csv"})
        EXPECT_TRUE(fs::exists(tables / f)) << f;
}

TEST_F(Cli, BaselineLabelsAreTwoWay)
{
    const fs::path res = dir("base");
    ASSERT_EQ(run("decompose --data " + data().string() + " --out " + res.string() + " --algorithm jithica --seed 3"), 0);
    const std::string labels = io::read_text(res / "labels.csv");
    EXPECT_EQ(labels.find("partially-joint"), std::string::npos);
    EXPECT_NE(labels.find(",joint,"), std::string::npos);
    EXPECT_TRUE(io::read_json(res / "run_config.json").contains("baseline_sigma0"));
}

TEST_F(Cli, ClassifyRoutes)
{
    const fs::path res = dir("cls");
    ASSERT_EQ(run("decompose --data " + data().string() + " --out " + res.string() + " --seed 3 --no-classify"), 0);
    ASSERT_EQ(run("classify --results " + res.string()), 0);
    EXPECT_TRUE(fs::exists(res / "classification.json"));
    std::ofstream(dir("groups.txt")) << "0\n0\n0\n1\n1\n1\n";
    ASSERT_EQ(run("classify --results " + res.string() + " --route spatial --groups " + dir("groups.txt").string()), 0);
    EXPECT_TRUE(fs::exists(res / "spatial.csv"));
    EXPECT_EQ(run("classify --results " + res.string() + " --route spatial"), 2);
}

TEST_F(Cli, ValidationFailureExitsThree)
{
    const fs::path d = dir("ragged");
    fs::copy(data(), d, fs::copy_options::recursive);
    // drop one voxel column from subject 2
    const Matrix O = io::read_matrix(d / "sub-02.csv");
    io::write_matrix(d / "sub-02.csv", O.leftCols(O.cols() - 1));
    EXPECT_EQ(run("decompose --data " + d.string() + " --out " + dir("ragged_res").string()), 3);
}

TEST_F(Cli, MissingTruthExitsFour)
{
    const fs::path d = dir("notruth");
    fs::copy(data(), d, fs::copy_options::recursive);
    auto m = io::read_json(d / "manifest.json");
    m.erase("ground_truth");
    io::write_json(d / "manifest.json", m);
    const fs::path res = dir("notruth_res");
    ASSERT_EQ(run("decompose --data " + d.string() + " --out " + res.string() + " --max-outer 1"), 0);
    EXPECT_EQ(run("evaluate --results " + res.string() + " --data " + d.string()), 4);
}

TEST_F(Cli, EmptyReportInputExitsFive)
{
    fs::create_directories(dir("empty"));
    EXPECT_EQ(run("report " + dir("empty").string() + " --out " + dir("empty_out").string()), 5);
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput)
{
    const fs::path a = dir("t1"), b = dir("t4");
    ASSERT_EQ(run("decompose --data " + data().string() + " --out " + a.string() + " --seed 9 --max-outer 2 --threads 1"), 0);
    ASSERT_EQ(run("decompose --data " + data().string() + " --out " + b.string() + " --seed 9 --max-outer 2 --threads 4"), 0);
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), a);
        EXPECT_EQ(io::read_text(e.path()), io::read_text(b / rel)) << rel;
    }
}
