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
 * @file jpji_cli.cpp Entry point: simulate, decompose, classify, evaluate, report.
 *
 *****************************************************************************/

#include "commands.hpp"

#include "jpji/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace jpji;
using namespace jpji::cli;

namespace {

std::array<double, 3> parse_weights(const std::string& s)
{
    std::array<double, 3> w{};
    std::string rest = s;
    for (int i = 0; i < 3; ++i) {
        const auto p = rest.find(',');
        if ((p == std::string::npos) != (i == 2)) throw Error(ErrorKind::InvalidConfig, "weights need three values");
        w[i] = io::parse_double(rest.substr(0, p));
        if (p != std::string::npos) rest = rest.substr(p + 1);
    }
    return w;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Joint blind source separation with partially-joint and individual sources"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::string sim_snr = "inf", sim_jrange, sim_prange, sim_partition;
    auto* s = app.add_subcommand("simulate", "Generate a synthetic multi-subject dataset with ground truth");
    s->add_option("--out", sim.out, "Output dataset directory")->required();
    s->add_option("--subjects", sim.spec.K, "Number of subjects K");
    s->add_option("--joint", sim.spec.C1, "Joint sources per subject");
    s->add_option("--pjoint", sim.spec.C2, "Partially-joint sources per subject");
    s->add_option("--individual", sim.spec.C3, "Individual sources per subject");
    s->add_option("--joint-range", sim_jrange, "Draw the joint count uniformly from LO:HI");
    s->add_option("--pjoint-range", sim_prange, "Draw the partially-joint count uniformly from LO:HI");
    s->add_option("--clusters", sim.spec.clusters, "Number of subject clusters");
    s->add_option("--partition", sim_partition, "Explicit cluster index per subject, comma separated");
    s->add_option("--voxels", sim.spec.V, "Voxels per map");
    s->add_option("--time", sim.spec.N, "Time points per subject");
    s->add_option("--snr,--snr-db", sim_snr, "Noise level in dB, or inf");
    s->add_option("--seed", sim.spec.seed, "Root seed");
    s->add_flag("--binary", sim.binary, "Write raw float64 matrices instead of CSV");

    DecomposeOptions dec;
    std::string components = "min", sigma0 = "auto", weights, estimator = "sample";
    std::optional<int> dec_clusters;
    bool no_snapshots = false;
    auto* d = app.add_subcommand("decompose", "Run JpJI-ICA or the JI-ThICA baseline on a dataset");
    d->add_option("--data", dec.data, "Dataset directory (manifest.json)")->required();
    d->add_option("--out", dec.out, "Results directory")->required();
    d->add_option("--algorithm", dec.algorithm, "jpji or jithica")->check(CLI::IsMember({"jpji", "jithica"}));
    d->add_option("--components", components, "min, auto or a fixed count");
    d->add_option("--cmax", dec.config.c_max, "Upper bound for the order search (0: min(N-1, 64))");
    d->add_option("--max-outer", dec.config.max_outer, "Outer sweeps");
    d->add_option("--eps0", dec.config.eps0, "Inner fixed-point tolerance");
    d->add_option("--weights", weights, "Cumulant weights for orders 2,3,4");
    d->add_option("--seed", dec.config.seed, "Root seed");
    d->add_option("--sigma0", sigma0, "Threshold: auto or a value (baseline: its own threshold)");
    d->add_option("--clusters", dec_clusters, "Fix the number of subject clusters for peer sets");
    d->add_option("--estimator", estimator, "sample or per-voxel")->check(CLI::IsMember({"sample", "per-voxel"}));
    d->add_option("--threads", dec.threads, "OpenMP threads (default: JPJI_THREADS or all)");
    d->add_flag("--binary", dec.binary, "Write raw float64 matrices instead of CSV");
    d->add_flag("--no-snapshots", no_snapshots, "Do not store per-sweep unmixing matrices");
    d->add_flag("--no-classify", "Skip source typing");

    ClassifyOptions cls;
    auto* c = app.add_subcommand("classify", "Re-run source typing on stored results");
    c->add_option("--results", cls.results, "Results directory")->required();
    c->add_option("--out", cls.out, "Output directory (default: the results directory)");
    c->add_option("--route", cls.route, "feature or spatial")->check(CLI::IsMember({"feature", "spatial"}));
    c->add_option("--sigma0", cls.sigma0, "Fixed threshold instead of the automatic one");
    c->add_option("--tau-joint", cls.tau_joint, "Flatness tolerance of the joint rule");
    c->add_option("--clusters", cls.clusters, "Fix the number of subject clusters");
    c->add_option("--groups", cls.groups, "Spatial route: file with one 0/1 group per subject");
    c->add_option("--data", cls.data, "Spatial route: take groups from the dataset's truth clusters");
    c->add_option("--q", cls.q, "FDR level of the spatial route");

    EvaluateOptions ev;
    auto* e = app.add_subcommand("evaluate", "Score results against the dataset's ground truth");
    e->add_option("--results", ev.results, "Results directory")->required();
    e->add_option("--data", ev.data, "Dataset directory with ground truth")->required();
    e->add_option("--out", ev.out, "Report path (default: <results>/report.json)");

    ReportOptions rep;
    auto* r = app.add_subcommand("report", "Aggregate report.json files into tables");
    r->add_option("inputs", rep.inputs, "report.json files or directories searched recursively")->required();
    r->add_option("--out", rep.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kInvalidSpec;
    }

    try {
        if (s->parsed()) {
            sim.spec.snr_db = parse_snr(sim_snr);
            if (!sim_jrange.empty()) sim.spec.C1_range = parse_range(sim_jrange);
            if (!sim_prange.empty()) sim.spec.C2_range = parse_range(sim_prange);
            if (!sim_partition.empty()) sim.spec.partition = parse_int_list(sim_partition);
            simulate(sim);
        } else if (d->parsed()) {
            AlgoConfig& cfg = dec.config;
            if (components == "min") {
                cfg.components = ComponentPolicy::GlobalMin;
            } else if (components == "auto") {
                cfg.components = ComponentPolicy::Auto;
            } else {
                cfg.components = ComponentPolicy::Fixed;
                try {
                    cfg.fixed_components = std::stoi(components);
                } catch (const std::exception&) {
                    throw Error(ErrorKind::InvalidConfig, "components must be min, auto or an integer");
                }
            }
            if (sigma0 != "auto") {
                const double v = io::parse_double(sigma0);
                if (dec.algorithm == "jithica")
                    dec.baseline_sigma0 = v;
                else
                    cfg.sigma0 = v;
            }
            if (!weights.empty()) cfg.weights = parse_weights(weights);
            cfg.clusters = dec_clusters;
            cfg.estimator = estimator == "per-voxel" ? CostEstimator::PerVoxel : CostEstimator::SampleCumulant;
            cfg.record_snapshots = !no_snapshots;
            cfg.classify = d->count("--no-classify") == 0;
            if (dec.threads <= 0)
                if (const char* env = std::getenv("JPJI_THREADS")) dec.threads = std::atoi(env);
            cfg.validate();
            decompose(dec);
        } else if (c->parsed()) {
            classify(cls);
        } else if (e->parsed()) {
            evaluate(ev);
        } else if (r->parsed()) {
            report(rep);
        }
    } catch (const CliError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.code();
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_code_for(err.kind());
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kFailure;
    }
    return kOk;
}
