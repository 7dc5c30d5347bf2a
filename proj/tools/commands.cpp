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
 * @file commands.cpp
 *
 *****************************************************************************/

#include "commands.hpp"

#include "jpji/io.hpp"
#include "jpji/jithica.hpp"
#include "jpji/jpji.hpp"
#include "jpji/kernels.hpp"
#include "jpji/metrics.hpp"
#include "jpji/typing.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

namespace jpji::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidSpec:
    case ErrorKind::InvalidConfig: return kInvalidSpec;
    case ErrorKind::Io:
    case ErrorKind::Parse: return kFailure;
    default: return kValidation;
    }
}

std::optional<double> parse_snr(const std::string& s)
{
    if (s == "inf" || s == "Inf" || s == "none") return std::nullopt;
    try {
        return io::parse_double(s);
    } catch (const Error&) {
        throw Error(ErrorKind::InvalidSpec, "snr must be a number or 'inf': '" + s + "'");
    }
}

std::pair<int, int> parse_range(const std::string& s)
{
    const auto p = s.find(':');
    try {
        if (p == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, p)), std::stoi(s.substr(p + 1))};
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidSpec, "range must look like LO:HI, got '" + s + "'");
    }
}

std::vector<int> parse_int_list(const std::string& s)
{
    std::vector<int> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidSpec, "not an integer list: '" + s + "'");
        }
    }
    return out;
}

namespace {

void print_warnings(const std::vector<std::string>& w)
{
    for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

json counts_json(const std::array<bool, 3>& ok)
{
    return {{"joint", ok[0]}, {"partially_joint", ok[1]}, {"individual", ok[2]}};
}

json score_json(const GroundTruth& truth, const Decomposition& dec)
{
    const Matching m = match_sources(truth, dec);
    const JsirResult js = jsir(truth, dec, m);
    const RunScore sc = score_run(truth, dec, m);
    json j;
    j["jsir_db"] = js.overall;
    j["jsir_per_subject"] = js.per_subject;
    j["counts_ok"] = counts_json(sc.counts_ok);
    j["peer_hits"] = sc.peer_hits;
    j["peer_total"] = sc.peer_total;
    j["acc_k"] = sc.peer_total > 0 ? 100.0 * sc.peer_hits / sc.peer_total : 0.0;
    json est = json::array();
    for (const auto& row : dec.labels) {
        std::array<int, 3> n{0, 0, 0};
        for (const auto& l : row) n[static_cast<int>(l.kind())]++;
        est.push_back(n);
    }
    j["estimated_counts"] = est;
    json match = json::array();
    for (std::size_t k = 0; k < m.truth_index.size(); ++k)
        for (std::size_t c = 0; c < m.truth_index[k].size(); ++c)
            match.push_back({{"subject", dec.subject_ids[k]},
                             {"slot", c},
                             {"truth_index", m.truth_index[k][c]},
                             {"sign", m.sign[k][c]},
                             {"abs_corr", m.abs_corr[k][c]}});
    j["matching"] = match;
    j["warnings"] = m.warnings;
    return j;
}

}  // namespace

void simulate(const SimulateOptions& o)
{
    o.spec.validate();
    const SimulatedData data = generate_dataset(o.spec);
    io::write_dataset(o.out, data, o.spec, o.binary ? io::MatrixFormat::Binary : io::MatrixFormat::Csv);
    std::cout << "wrote " << data.datasets.size() << " subjects (C1=" << data.C1 << ", C2=" << data.C2 << ") to "
              << o.out.string() << "\n";
}

void decompose(const DecomposeOptions& o)
{
    if (o.algorithm != "jpji" && o.algorithm != "jithica")
        throw Error(ErrorKind::InvalidConfig, "unknown algorithm '" + o.algorithm + "'");
    kernels::set_threads(o.threads);
    const io::LoadedDataset ds = io::read_dataset(o.data);
    AlgoConfig cfg = o.config;
    if (ds.manifest.contains("spec") && !ds.manifest["spec"]["snr_db"].is_null() && !cfg.noise_snr_db)
        cfg.noise_snr_db = ds.manifest["spec"]["snr_db"].get<double>();
    const ValidationResult v = validate_analysis_input(ds.datasets, cfg);
    std::vector<std::string> warnings = v.warnings;
    const auto pre = preprocess_all(ds.datasets, cfg, &warnings);
    std::vector<std::string> ids;
    for (const auto& d : ds.datasets) ids.push_back(d.id);

    Decomposition dec;
    json extra = json::object();
    if (o.algorithm == "jpji") {
        dec = run_jpji_ica(ids, pre, cfg);
    } else {
        JiThicaConfig jc;
        jc.base = cfg;
        if (o.baseline_sigma0) {
            jc.sigma0 = *o.baseline_sigma0;
        } else {
            AlgoConfig ref = cfg;
            ref.record_snapshots = false;
            ref.classify = true;
            jc.sigma0 = default_baseline_sigma0(run_jpji_ica(ids, pre, ref));
        }
        extra["baseline_sigma0"] = jc.sigma0;
        dec = run_ji_thica(ids, pre, jc);
    }
    dec.warnings.insert(dec.warnings.begin(), warnings.begin(), warnings.end());
    print_warnings(dec.warnings);
    io::write_results(o.out, dec, cfg, o.binary ? io::MatrixFormat::Binary : io::MatrixFormat::Csv, extra);
    std::cout << o.algorithm << ": " << dec.n_subjects() << " subjects, " << dec.n_slots() << " components, "
              << dec.sweeps_run << " sweeps, results in " << o.out.string() << "\n";
}

void classify(const ClassifyOptions& o)
{
    io::ResultsFiles r = io::read_results(o.results);
    Decomposition& dec = r.dec;
    const fs::path out = o.out.empty() ? o.results : o.out;
    if (o.route == "feature") {
        AlgoConfig cfg = r.config;
        if (o.sigma0) cfg.sigma0 = *o.sigma0;
        if (o.tau_joint) cfg.tau_joint = *o.tau_joint;
        if (o.clusters) cfg.clusters = *o.clusters;
        cfg.validate();
        dec.warnings.clear();
        classify_decomposition(dec, cfg);
        print_warnings(dec.warnings);
        io::write_labels_csv(out / "labels.csv", dec);
        io::write_features_csv(out / "features.csv", dec);
        io::write_json(out / "classification.json", {{"route", "feature"},
                                                     {"sigma", dec.features.sigma_opt},
                                                     {"sigma_method", dec.features.sigma_method},
                                                     {"joint_slots", dec.features.joint_slots},
                                                     {"tau_joint", cfg.tau_joint},
                                                     {"warnings", dec.warnings}});
        std::cout << "sigma = " << io::format_double(dec.features.sigma_opt) << " (" << dec.features.sigma_method
                  << "), labels in " << (out / "labels.csv").string() << "\n";
        return;
    }
    if (o.route != "spatial") throw Error(ErrorKind::InvalidConfig, "route must be 'feature' or 'spatial'");
    std::vector<int> groups;
    if (!o.groups.empty()) {
        std::string text = io::read_text(o.groups);
        std::replace(text.begin(), text.end(), '\n', ',');
        std::replace(text.begin(), text.end(), ' ', ',');
        std::string clean;
        for (char ch : text)
            if (!(ch == ',' && (clean.empty() || clean.back() == ','))) clean += ch;
        if (!clean.empty() && clean.back() == ',') clean.pop_back();
        groups = parse_int_list(clean);
    } else if (!o.data.empty()) {
        const io::LoadedDataset ds = io::read_dataset(o.data);
        if (!ds.truth) throw CliError(kTruthAbsent, "dataset has no ground truth to take groups from");
        groups = ds.truth->cluster_of;
    } else {
        throw Error(ErrorKind::InvalidConfig, "spatial route needs --groups or --data");
    }
    if (static_cast<int>(groups.size()) != dec.n_subjects())
        throw Error(ErrorKind::LengthMismatch, "group vector length differs from the subject count");
    const auto res = classify_by_spatial(dec, groups, o.q);
    std::string s = "slot,verdict,discoveries,feature_majority,agree\n";
    int agree = 0;
    for (std::size_t c = 0; c < res.size(); ++c) {
        std::string majority;
        if (!dec.labels.empty()) {
            std::array<int, 3> n{0, 0, 0};
            for (const auto& row : dec.labels)
                if (c < row.size()) n[static_cast<int>(row[c].kind())]++;
            majority = to_string(static_cast<SourceKind>(std::max_element(n.begin(), n.end()) - n.begin()));
        }
        const bool same = majority == to_string(res[c].verdict);
        agree += same;
        s += std::to_string(c) + "," + to_string(res[c].verdict) + "," + std::to_string(res[c].discoveries) + "," +
             majority + "," + (same ? "1" : "0") + "\n";
        Matrix mask(1, static_cast<Eigen::Index>(res[c].mask.size()));
        for (std::size_t v = 0; v < res[c].mask.size(); ++v) mask(0, static_cast<Eigen::Index>(v)) = res[c].mask[v];
        io::write_matrix_csv(out / "spatial" / ("mask_slot" + std::to_string(c) + ".csv"), mask);
    }
    io::write_text(out / "spatial.csv", s);
    std::cout << "spatial route: " << agree << "/" << res.size() << " slots agree with the feature labels\n";
}

void evaluate(const EvaluateOptions& o)
{
    io::ResultsFiles r = io::read_results(o.results);
    const io::LoadedDataset ds = io::read_dataset(o.data);
    if (!ds.truth) throw CliError(kTruthAbsent, "dataset '" + o.data.string() + "' has no ground truth");
    const GroundTruth& truth = *ds.truth;
    Decomposition& dec = r.dec;
    if (dec.labels.empty()) throw Error(ErrorKind::InvalidConfig, "results carry no labels; run classify first");

    json rep = score_json(truth, dec);
    rep["format_version"] = "1";
    rep["algorithm"] = dec.algorithm;
    rep["n_subjects"] = dec.n_subjects();
    rep["n_slots"] = dec.n_slots();
    rep["spec"] = ds.manifest.value("spec", json(nullptr));
    rep["snr_db"] = ds.manifest.contains("spec") ? ds.manifest["spec"]["snr_db"] : json(nullptr);
    rep["seed"] = r.config.seed;
    rep["sigma_opt"] = dec.features.sigma_opt;
    rep["sigma_method"] = dec.features.sigma_method;
    json tc = json::array();
    for (int k = 0; k < truth.n_subjects(); ++k) tc.push_back(truth.counts(k));
    rep["true_counts"] = tc;

    json sweeps = json::array();
    if (dec.algorithm == "jpji" && !dec.snapshots.empty()) {
        io::attach_observations(dec, ds.datasets);
        AlgoConfig cfg = r.config;
        cfg.classify = true;
        for (const auto& snap : dec.snapshots) {
            json s;
            s["sweep"] = snap.sweep;
            try {
                const Decomposition at = decomposition_at_sweep(dec, snap.sweep, cfg);
                const json sc = score_json(truth, at);
                for (const char* key : {"jsir_db", "counts_ok", "peer_hits", "peer_total", "acc_k"}) s[key] = sc[key];
            } catch (const Error& e) {
                s["error"] = e.what();
            }
            sweeps.push_back(s);
        }
    }
    rep["per_sweep"] = sweeps;

    const KurtosisDiagnostic kd = kurtosis_feature_diagnostic(dec);
    json pts = json::array();
    for (const auto& p : kd.points)
        pts.push_back({{"slot", p.slot},
                       {"subject", dec.subject_ids[p.subject]},
                       {"kurtosis", p.kurtosis},
                       {"jpjif", std::isfinite(p.jpjif) ? json(p.jpjif) : json(nullptr)},
                       {"kind", to_string(p.kind)}});
    rep["kurtosis"] = {{"points", pts}, {"a", kd.a}, {"b", kd.b}, {"r2", kd.r2}, {"warnings", kd.warnings}};

    const fs::path out = o.out.empty() ? o.results / "report.json" : o.out;
    io::write_json(out, rep);
    const auto& ok = rep["counts_ok"];
    std::cout << "jSIR " << io::format_double(rep["jsir_db"].get<double>()) << " dB, counts J/PJ/I "
              << ok["joint"] << "/" << ok["partially_joint"] << "/" << ok["individual"] << ", peer sets "
              << rep["peer_hits"] << "/" << rep["peer_total"] << ", report in " << out.string() << "\n";
}

namespace {

struct Agg {
    int runs = 0;
    double jsir = 0.0;
    std::array<double, 3> counts{0.0, 0.0, 0.0};
    long hits = 0;
    long total = 0;

    void add(const json& s)
    {
        ++runs;
        jsir += s.at("jsir_db").get<double>();
        const auto& ok = s.at("counts_ok");
        counts[0] += ok.at("joint").get<bool>();
        counts[1] += ok.at("partially_joint").get<bool>();
        counts[2] += ok.at("individual").get<bool>();
        hits += s.at("peer_hits").get<long>();
        total += s.at("peer_total").get<long>();
    }

    std::string row() const
    {
        const double n = runs;
        return std::to_string(runs) + "," + io::format_double(jsir / n) + "," + io::format_double(100.0 * counts[0] / n) +
               "," + io::format_double(100.0 * counts[1] / n) + "," + io::format_double(100.0 * counts[2] / n) + "," +
               io::format_double(total > 0 ? 100.0 * static_cast<double>(hits) / static_cast<double>(total) : 0.0);
    }
};

constexpr const char* kAggHeader = "n_runs,jsir_db,acc_c_joint,acc_c_pjoint,acc_c_individual,acc_k";

std::string snr_key(const json& v)
{
    return v.is_null() ? "inf" : io::format_double(v.get<double>());
}

}  // namespace

void report(const ReportOptions& o)
{
    std::vector<fs::path> files;
    for (const auto& in : o.inputs) {
        if (fs::is_directory(in)) {
            for (const auto& e : fs::recursive_directory_iterator(in))
                if (e.is_regular_file() && e.path().filename() == "report.json") files.push_back(e.path());
        } else if (fs::is_regular_file(in)) {
            files.push_back(in);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw CliError(kEmptyReportInput, "no report.json files found in the given inputs");

    std::map<std::pair<std::string, int>, Agg> conv, vs_k;
    std::map<std::pair<std::string, std::string>, Agg> vs_snr;
    std::map<std::string, Agg> algo;
    std::string kurt = "run,slot,subject,kurtosis,kurtosis_sq,jpjif,kind\n";
    for (std::size_t i = 0; i < files.size(); ++i) {
        const json rep = io::read_json(files[i]);
        try {
            const std::string a = rep.at("algorithm").get<std::string>();
            algo[a].add(rep);
            vs_k[{a, rep.at("n_subjects").get<int>()}].add(rep);
            vs_snr[{a, snr_key(rep.at("snr_db"))}].add(rep);
            for (const auto& s : rep.at("per_sweep"))
                if (!s.contains("error")) conv[{a, s.at("sweep").get<int>()}].add(s);
            for (const auto& p : rep.at("kurtosis").at("points")) {
                const double k = p.at("kurtosis").get<double>();
                kurt += std::to_string(i) + "," + std::to_string(p.at("slot").get<int>()) + "," +
                        p.at("subject").get<std::string>() + "," + io::format_double(k) + "," +
                        io::format_double(k * k) + "," +
                        (p.at("jpjif").is_null() ? std::string("nan") : io::format_double(p.at("jpjif").get<double>())) +
                        "," + p.at("kind").get<std::string>() + "\n";
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Parse, files[i].string() + ": " + e.what());
        }
    }
    std::string s = std::string("algorithm,sweep,") + kAggHeader + "\n";
    for (const auto& [key, agg] : conv) s += key.first + "," + std::to_string(key.second) + "," + agg.row() + "\n";
    io::write_text(o.out / "convergence.csv", s);
    s = std::string("algorithm,n_subjects,") + kAggHeader + "\n";
    for (const auto& [key, agg] : vs_k) s += key.first + "," + std::to_string(key.second) + "," + agg.row() + "\n";
    io::write_text(o.out / "vs_k.csv", s);
    s = std::string("algorithm,snr_db,") + kAggHeader + "\n";
    for (const auto& [key, agg] : vs_snr) s += key.first + "," + key.second + "," + agg.row() + "\n";
    io::write_text(o.out / "vs_snr.csv", s);
    s = std::string("algorithm,") + kAggHeader + "\n";
    for (const auto& [key, agg] : algo) s += key + "," + agg.row() + "\n";
    io::write_text(o.out / "algorithm_comparison.csv", s);
    io::write_text(o.out / "kurtosis_scatter.csv", kurt);
    std::cout << "aggregated " << files.size() << " reports into " << o.out.string() << "\n";
}

}  // namespace jpji::cli
