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
 * @file io.cpp
 *
 *****************************************************************************/

#include "jpji/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace jpji::io {

namespace fs = std::filesystem;

std::string format_double(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    double v = 0.0;
    const char* first = s.data() + b;
    if (b < e && s[b] == '+') ++first;
    const auto r = std::from_chars(first, s.data() + e, v);
    if (r.ec != std::errc() || r.ptr != s.data() + e) throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
    return v;
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const fs::path& path, const nlohmann::json& j)
{
    write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path)
{
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

void write_matrix_csv(const fs::path& path, const Matrix& M)
{
    std::string s;
    s.reserve(static_cast<std::size_t>(M.size()) * 24);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) s += ',';
            s += format_double(M(i, j));
        }
        s += '\n';
    }
    write_text(path, s);
}

Matrix read_matrix_csv(const fs::path& path)
{
    const std::string text = read_text(path);
    std::vector<double> vals;
    Eigen::Index rows = 0, cols = -1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Eigen::Index n = 0;
        std::size_t p = 0;
        while (true) {
            const std::size_t q = line.find(',', p);
            vals.push_back(parse_double(line.substr(p, q == std::string::npos ? std::string::npos : q - p)));
            ++n;
            if (q == std::string::npos) break;
            p = q + 1;
        }
        if (cols >= 0 && n != cols) throw Error(ErrorKind::Parse, path.string() + ": ragged rows");
        cols = n;
        ++rows;
    }
    if (rows == 0) return Matrix(0, 0);
    Matrix M(rows, cols);
    std::copy(vals.begin(), vals.end(), M.data());
    return M;
}

namespace {

void put_u32(std::string& s, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint32_t get_u32(const std::string& s, std::size_t at)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
    return v;
}

}  // namespace

void write_matrix_binary(const fs::path& path, const Matrix& M)
{
    std::string s = "JPJI";
    put_u32(s, static_cast<std::uint32_t>(M.rows()));
    put_u32(s, static_cast<std::uint32_t>(M.cols()));
    put_u32(s, 0);
    s.reserve(16 + static_cast<std::size_t>(M.size()) * 8);
    for (Eigen::Index i = 0; i < M.size(); ++i) {
        std::uint64_t bits;
        const double v = M.data()[i];
        std::memcpy(&bits, &v, 8);
        for (int b = 0; b < 8; ++b) s += static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    write_text(path, s);
}

Matrix read_matrix_binary(const fs::path& path)
{
    const std::string s = read_text(path);
    if (s.size() < 16 || s.compare(0, 4, "JPJI") != 0) throw Error(ErrorKind::Parse, path.string() + ": bad header");
    const std::uint32_t rows = get_u32(s, 4), cols = get_u32(s, 8);
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    if (s.size() != 16 + 8 * n) throw Error(ErrorKind::Parse, path.string() + ": size does not match header");
    Matrix M(rows, cols);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[16 + 8 * i + b])) << (8 * b);
        double v;
        std::memcpy(&v, &bits, 8);
        M.data()[i] = v;
    }
    return M;
}

void write_matrix(const fs::path& path, const Matrix& M)
{
    if (path.extension() == ".bin")
        write_matrix_binary(path, M);
    else
        write_matrix_csv(path, M);
}

Matrix read_matrix(const fs::path& path)
{
    return path.extension() == ".bin" ? read_matrix_binary(path) : read_matrix_csv(path);
}

std::string matrix_extension(MatrixFormat f)
{
    return f == MatrixFormat::Binary ? ".bin" : ".csv";
}

nlohmann::json label_to_json(const SourceLabel& l, const std::vector<std::string>& ids)
{
    nlohmann::json j;
    j["kind"] = to_string(l.kind());
    nlohmann::json peers = nlohmann::json::array();
    for (int p : l.peers()) peers.push_back(ids.at(static_cast<std::size_t>(p)));
    j["peers"] = peers;
    return j;
}

SourceLabel label_from_json(const nlohmann::json& j, const std::vector<std::string>& ids, int self)
{
    std::vector<int> peers;
    for (const auto& p : j.at("peers")) {
        const auto it = std::find(ids.begin(), ids.end(), p.get<std::string>());
        if (it == ids.end()) throw Error(ErrorKind::Parse, "unknown subject id in peer set");
        peers.push_back(static_cast<int>(it - ids.begin()));
    }
    return SourceLabel::make(source_kind_from_string(j.at("kind").get<std::string>()), peers,
                             static_cast<int>(ids.size()), self);
}

std::string peers_to_string(const SourceLabel& l, const std::vector<std::string>& ids)
{
    std::string s;
    for (int p : l.peers()) {
        if (!s.empty()) s += ';';
        s += ids.at(static_cast<std::size_t>(p));
    }
    return s;
}

nlohmann::json spec_to_json(const ScenarioSpec& spec)
{
    nlohmann::json j;
    j["K"] = spec.K;
    j["C1"] = spec.C1;
    j["C2"] = spec.C2;
    j["C3"] = spec.C3;
    if (spec.C1_range) j["C1_range"] = {spec.C1_range->first, spec.C1_range->second};
    if (spec.C2_range) j["C2_range"] = {spec.C2_range->first, spec.C2_range->second};
    j["clusters"] = spec.clusters;
    if (!spec.partition.empty()) j["partition"] = spec.partition;
    j["V"] = spec.V;
    j["N"] = spec.N;
    j["snr_db"] = spec.snr_db ? nlohmann::json(*spec.snr_db) : nlohmann::json(nullptr);
    j["seed"] = spec.seed;
    return j;
}

void write_dataset(const fs::path& dir, const SimulatedData& data, const ScenarioSpec& spec, MatrixFormat format)
{
    fs::create_directories(dir);
    const std::string ext = matrix_extension(format);
    std::vector<std::string> ids;
    for (const auto& d : data.datasets) ids.push_back(d.id);

    nlohmann::json m;
    m["format_version"] = "1";
    m["n_subjects"] = data.datasets.size();
    m["n_voxels"] = data.datasets.empty() ? 0 : data.datasets.front().n_voxels();
    m["seed"] = spec.seed;
    m["spec"] = spec_to_json(spec);
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& d : data.datasets) {
        const std::string file = d.id + ext;
        write_matrix(dir / file, d.observations);
        subjects.push_back({{"id", d.id}, {"n_time", d.n_time()}, {"path", file}});
    }
    m["subjects"] = subjects;

    const GroundTruth& t = data.truth;
    nlohmann::json gt;
    gt["joint_count"] = t.joint_count;
    gt["pjoint_counts"] = t.pjoint_counts;
    gt["individual_counts"] = t.individual_counts;
    gt["cluster_of"] = t.cluster_of;
    nlohmann::json ts = nlohmann::json::array();
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const std::string s_path = "truth/S_" + ids[k] + ext;
        const std::string a_path = "truth/A_" + ids[k] + ext;
        write_matrix(dir / s_path, t.sources[k]);
        write_matrix(dir / a_path, t.mixing[k]);
        nlohmann::json labels = nlohmann::json::array();
        for (std::size_t c = 0; c < t.labels[k].size(); ++c) {
            nlohmann::json l = label_to_json(t.labels[k][c], ids);
            l["map_id"] = t.map_ids[k][c];
            labels.push_back(l);
        }
        ts.push_back({{"id", ids[k]}, {"sources", s_path}, {"mixing", a_path}, {"labels", labels}});
    }
    gt["subjects"] = ts;
    m["ground_truth"] = gt;
    write_json(dir / "manifest.json", m);
}

LoadedDataset read_dataset(const fs::path& dir)
{
    LoadedDataset out;
    out.manifest = read_json(dir / "manifest.json");
    const auto& m = out.manifest;
    try {
        if (m.at("format_version").get<std::string>() != "1")
            throw Error(ErrorKind::Parse, "unsupported manifest format_version");
        std::vector<std::string> ids;
        for (const auto& s : m.at("subjects")) {
            SubjectDataset d;
            d.id = s.at("id").get<std::string>();
            d.observations = read_matrix(dir / s.at("path").get<std::string>());
            if (d.n_time() != s.at("n_time").get<int>())
                throw Error(ErrorKind::Parse, "subject '" + d.id + "': n_time does not match the matrix");
            if (m.contains("n_voxels") && d.n_voxels() != m.at("n_voxels").get<int>())
                throw Error(ErrorKind::MismatchedVoxelCount, "subject '" + d.id + "': n_voxels differs from manifest");
            ids.push_back(d.id);
            out.datasets.push_back(std::move(d));
        }
        if (m.contains("ground_truth") && !m.at("ground_truth").is_null()) {
            const auto& g = m.at("ground_truth");
            GroundTruth t;
            t.joint_count = g.at("joint_count").get<int>();
            t.pjoint_counts = g.at("pjoint_counts").get<std::vector<int>>();
            t.individual_counts = g.at("individual_counts").get<std::vector<int>>();
            t.cluster_of = g.at("cluster_of").get<std::vector<int>>();
            int k = 0;
            for (const auto& s : g.at("subjects")) {
                t.sources.push_back(read_matrix(dir / s.at("sources").get<std::string>()));
                t.mixing.push_back(read_matrix(dir / s.at("mixing").get<std::string>()));
                std::vector<SourceLabel> labels;
                std::vector<int> map_ids;
                for (const auto& l : s.at("labels")) {
                    labels.push_back(label_from_json(l, ids, k));
                    map_ids.push_back(l.at("map_id").get<int>());
                }
                t.labels.push_back(std::move(labels));
                t.map_ids.push_back(std::move(map_ids));
                ++k;
            }
            out.truth = std::move(t);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, "manifest: " + std::string(e.what()));
    }
    return out;
}

nlohmann::json config_to_json(const AlgoConfig& c)
{
    nlohmann::json j;
    j["weights"] = c.weights;
    j["max_outer"] = c.max_outer;
    j["eps0"] = c.eps0;
    j["components"] = c.components == ComponentPolicy::GlobalMin ? "min"
                      : c.components == ComponentPolicy::Auto    ? "auto"
                                                                 : "fixed";
    j["fixed_components"] = c.fixed_components;
    j["c_max"] = c.c_max;
    j["seed"] = c.seed;
    j["sigma0"] = c.sigma0 ? nlohmann::json(*c.sigma0) : nlohmann::json(nullptr);
    j["noise_snr_db"] = c.noise_snr_db ? nlohmann::json(*c.noise_snr_db) : nlohmann::json(nullptr);
    j["inner_cap"] = c.inner_cap;
    j["max_passes"] = c.max_passes;
    j["pass_tol"] = c.pass_tol;
    j["self_threshold"] = c.self_threshold;
    j["tau_joint"] = c.tau_joint;
    j["sigma_null"] = c.sigma_null;
    j["clusters"] = c.clusters ? nlohmann::json(*c.clusters) : nlohmann::json(nullptr);
    j["estimator"] = c.estimator == CostEstimator::PerVoxel ? "per-voxel" : "sample";
    j["record_snapshots"] = c.record_snapshots;
    j["classify"] = c.classify;
    return j;
}

AlgoConfig config_from_json(const nlohmann::json& j)
{
    AlgoConfig c;
    try {
        c.weights = j.at("weights").get<std::array<double, 3>>();
        c.max_outer = j.at("max_outer").get<int>();
        c.eps0 = j.at("eps0").get<double>();
        const std::string comp = j.at("components").get<std::string>();
        c.components = comp == "min" ? ComponentPolicy::GlobalMin
                       : comp == "auto" ? ComponentPolicy::Auto
                                        : ComponentPolicy::Fixed;
        c.fixed_components = j.at("fixed_components").get<int>();
        c.c_max = j.at("c_max").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("sigma0").is_null()) c.sigma0 = j.at("sigma0").get<double>();
        if (!j.at("noise_snr_db").is_null()) c.noise_snr_db = j.at("noise_snr_db").get<double>();
        c.inner_cap = j.at("inner_cap").get<int>();
        c.max_passes = j.at("max_passes").get<int>();
        c.pass_tol = j.at("pass_tol").get<double>();
        c.self_threshold = j.at("self_threshold").get<double>();
        c.tau_joint = j.at("tau_joint").get<double>();
        c.sigma_null = j.at("sigma_null").get<double>();
        if (!j.at("clusters").is_null()) c.clusters = j.at("clusters").get<int>();
        c.estimator = j.at("estimator").get<std::string>() == "per-voxel" ? CostEstimator::PerVoxel
                                                                          : CostEstimator::SampleCumulant;
        c.record_snapshots = j.at("record_snapshots").get<bool>();
        c.classify = j.at("classify").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("run config: ") + e.what());
    }
    c.validate();
    return c;
}

namespace {

const char* mode_name(ExtractMode m)
{
    return m == ExtractMode::Peer ? "peer" : "self";
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t p = 0;
    while (true) {
        const std::size_t q = s.find(sep, p);
        out.push_back(s.substr(p, q == std::string::npos ? std::string::npos : q - p));
        if (q == std::string::npos) break;
        p = q + 1;
    }
    return out;
}

std::vector<std::vector<std::string>> read_table(const fs::path& path)
{
    const std::string text = read_text(path);
    std::vector<std::vector<std::string>> rows;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split(line, ','));
    }
    if (!rows.empty()) rows.erase(rows.begin());  // header
    return rows;
}

fs::path find_matrix(const fs::path& dir, const std::string& stem)
{
    for (const char* ext : {".csv", ".bin"}) {
        const fs::path p = dir / (stem + ext);
        if (fs::exists(p)) return p;
    }
    throw Error(ErrorKind::Io, "missing matrix " + (dir / stem).string());
}

}  // namespace

void write_labels_csv(const fs::path& path, const Decomposition& dec)
{
    std::string s = "slot,subject,kind,peer_set\n";
    const int C = dec.n_slots();
    for (int c = 0; c < C; ++c)
        for (std::size_t k = 0; k < dec.labels.size(); ++k) {
            if (c >= static_cast<int>(dec.labels[k].size())) continue;
            const SourceLabel& l = dec.labels[k][static_cast<std::size_t>(c)];
            s += std::to_string(c) + "," + dec.subject_ids[k] + "," + to_string(l.kind()) + "," +
                 peers_to_string(l, dec.subject_ids) + "\n";
        }
    write_text(path, s);
}

void write_features_csv(const fs::path& path, const Decomposition& dec)
{
    std::string s = "slot,subject,jpjif,deviation\n";
    const auto& f = dec.features;
    const int C = dec.n_slots();
    for (int c = 0; c < C; ++c)
        for (std::size_t k = 0; k < f.jpjif.size(); ++k) {
            if (c >= static_cast<int>(f.jpjif[k].size())) continue;
            s += std::to_string(c) + "," + dec.subject_ids[k] + "," + format_double(f.jpjif[k][c]) + "," +
                 format_double(f.deviation[k][c]) + "\n";
        }
    write_text(path, s);
}

void write_results(const fs::path& dir, const Decomposition& dec, const AlgoConfig& config, MatrixFormat format,
                   const nlohmann::json& extra)
{
    fs::create_directories(dir);
    const std::string ext = matrix_extension(format);
    for (std::size_t k = 0; k < dec.subjects.size(); ++k) {
        const auto& id = dec.subject_ids[k];
        const auto& s = dec.subjects[k];
        write_matrix(dir / ("U_" + id + ext), s.U);
        write_matrix(dir / ("Y_" + id + ext), s.Y);
        write_matrix(dir / ("W_" + id + ext), s.pre.W_total);
        write_matrix(dir / ("mean_" + id + ext), Matrix(s.pre.mean.transpose()));
    }
    for (const auto& snap : dec.snapshots)
        for (std::size_t k = 0; k < snap.U.size(); ++k)
            write_matrix(dir / "snapshots" / ("sweep" + std::to_string(snap.sweep) + "_U_" + dec.subject_ids[k] + ext),
                         snap.U[k]);
    if (!dec.features.jpjif.empty()) write_features_csv(dir / "features.csv", dec);
    if (!dec.labels.empty()) write_labels_csv(dir / "labels.csv", dec);

    std::string t = "sweep,slot,subject,pass,mode,converged,iteration,cost\n";
    for (const auto& tr : dec.traces)
        for (std::size_t i = 0; i < tr.costs.size(); ++i)
            t += std::to_string(tr.sweep) + "," + std::to_string(tr.slot) + "," + dec.subject_ids[tr.subject] + "," +
                 std::to_string(tr.pass) + "," + mode_name(tr.mode) + "," + (tr.converged ? "1" : "0") + "," +
                 std::to_string(i) + "," + format_double(tr.costs[i]) + "\n";
    write_text(dir / "cost_trace.csv", t);

    nlohmann::json j;
    j["format_version"] = "1";
    j["algorithm"] = dec.algorithm;
    j["subjects"] = dec.subject_ids;
    std::vector<int> comps;
    for (const auto& s : dec.subjects) comps.push_back(static_cast<int>(s.U.rows()));
    j["components"] = comps;
    j["sweeps_run"] = dec.sweeps_run;
    std::vector<int> snaps;
    for (const auto& s : dec.snapshots) snaps.push_back(s.sweep);
    j["snapshot_sweeps"] = snaps;
    j["matrix_format"] = format == MatrixFormat::Binary ? "binary" : "csv";
    j["config"] = config_to_json(config);
    j["sigma_opt"] = dec.features.sigma_opt;
    j["sigma_method"] = dec.features.sigma_method;
    j["joint_slots"] = dec.features.joint_slots;
    j["jpjif_joint_mean"] = dec.features.jpjif_joint_mean;
    j["warnings"] = dec.warnings;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_json(dir / "run_config.json", j);
}

ResultsFiles read_results(const fs::path& dir)
{
    ResultsFiles r;
    r.run_config = read_json(dir / "run_config.json");
    const auto& j = r.run_config;
    r.config = config_from_json(j.at("config"));
    Decomposition& d = r.dec;
    try {
        d.algorithm = j.at("algorithm").get<std::string>();
        d.subject_ids = j.at("subjects").get<std::vector<std::string>>();
        d.sweeps_run = j.at("sweeps_run").get<int>();
        d.warnings = j.at("warnings").get<std::vector<std::string>>();
        d.features.sigma_opt = j.at("sigma_opt").get<double>();
        d.features.sigma_method = j.at("sigma_method").get<std::string>();
        d.features.joint_slots = j.at("joint_slots").get<std::vector<int>>();
        d.features.jpjif_joint_mean = j.at("jpjif_joint_mean").get<double>();
        for (int s : j.at("snapshot_sweeps").get<std::vector<int>>()) {
            Snapshot snap;
            snap.sweep = s;
            for (const auto& id : d.subject_ids)
                snap.U.push_back(read_matrix(find_matrix(dir / "snapshots", "sweep" + std::to_string(s) + "_U_" + id)));
            d.snapshots.push_back(std::move(snap));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("run_config.json: ") + e.what());
    }
    const std::size_t K = d.subject_ids.size();
    for (const auto& id : d.subject_ids) {
        SubjectResult s;
        s.U = read_matrix(find_matrix(dir, "U_" + id));
        s.Y = read_matrix(find_matrix(dir, "Y_" + id));
        s.pre.W_total = read_matrix(find_matrix(dir, "W_" + id));
        s.pre.mean = read_matrix(find_matrix(dir, "mean_" + id)).row(0).transpose();
        s.pre.C = static_cast<int>(s.U.rows());
        d.subjects.push_back(std::move(s));
    }
    auto index_of = [&](const std::string& id) {
        const auto it = std::find(d.subject_ids.begin(), d.subject_ids.end(), id);
        if (it == d.subject_ids.end()) throw Error(ErrorKind::Parse, "unknown subject '" + id + "'");
        return static_cast<std::size_t>(it - d.subject_ids.begin());
    };
    if (fs::exists(dir / "labels.csv")) {
        d.labels.assign(K, {});
        for (std::size_t k = 0; k < K; ++k) d.labels[k].resize(d.subjects[k].U.rows());
        for (const auto& row : read_table(dir / "labels.csv")) {
            if (row.size() != 4) throw Error(ErrorKind::Parse, "labels.csv: expected 4 columns");
            const std::size_t k = index_of(row[1]);
            std::vector<int> peers;
            if (!row[3].empty())
                for (const auto& p : split(row[3], ';')) peers.push_back(static_cast<int>(index_of(p)));
            d.labels[k].at(std::stoul(row[0])) =
                SourceLabel::make(source_kind_from_string(row[2]), peers, static_cast<int>(K), static_cast<int>(k));
        }
    }
    if (fs::exists(dir / "features.csv")) {
        d.features.jpjif.assign(K, {});
        d.features.deviation.assign(K, {});
        for (std::size_t k = 0; k < K; ++k) {
            d.features.jpjif[k].assign(d.subjects[k].U.rows(), 0.0);
            d.features.deviation[k].assign(d.subjects[k].U.rows(), 0.0);
        }
        for (const auto& row : read_table(dir / "features.csv")) {
            if (row.size() != 4) throw Error(ErrorKind::Parse, "features.csv: expected 4 columns");
            const std::size_t k = index_of(row[1]);
            const std::size_t c = std::stoul(row[0]);
            d.features.jpjif[k].at(c) = parse_double(row[2]);
            d.features.deviation[k].at(c) = parse_double(row[3]);
        }
    }
    return r;
}

void attach_observations(Decomposition& dec, const std::vector<SubjectDataset>& datasets)
{
    if (datasets.size() != dec.subjects.size())
        throw Error(ErrorKind::LengthMismatch, "results and dataset have different subject counts");
    for (std::size_t k = 0; k < datasets.size(); ++k) {
        if (datasets[k].id != dec.subject_ids[k])
            throw Error(ErrorKind::Parse, "subject order differs between results and dataset");
        auto& pre = dec.subjects[k].pre;
        const Matrix& O = datasets[k].observations;
        if (pre.W_total.cols() != O.rows() || pre.mean.size() != O.rows())
            throw Error(ErrorKind::LengthMismatch, "unmixing matrix does not match subject '" + datasets[k].id + "'");
        Matrix X = O;
        X.colwise() -= pre.mean;
        pre.Z = pre.W_total * X;
    }
}

}  // namespace jpji::io
