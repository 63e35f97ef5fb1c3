#include "edtwk/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "edtwk/csv.hpp"
#include "edtwk/embedding.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace edtwk {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string path_in(const PipelineConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void require_file(const std::string& path, const std::string& producer) {
    if (!fs::exists(path))
        throw prerequisite_error("missing prerequisite file '" + path + "' (run `" + producer +
                                 "` first)");
}

std::map<std::string, std::string> config_echo(const PipelineConfig& cfg) {
    std::map<std::string, std::string> m;
    m["input"] = cfg.input;
    m["missing"] = cfg.missing == MissingPolicy::Reject ? "reject" : "forward-fill";
    m["out_dir"] = cfg.out_dir;
    m["seed"] = std::to_string(cfg.seed);
    m["width"] = std::to_string(cfg.width);
    m["entropy_window"] = std::to_string(cfg.entropy_window);
    m["affinity"] = to_string(cfg.affinity);
    m["sigma"] = cfg.sigma ? format_double(*cfg.sigma) : "auto";
    m["tol"] = format_double(cfg.replicator.tol);
    m["max_iter"] = std::to_string(cfg.replicator.max_iter);
    m["support_eps"] = format_double(cfg.replicator.support_eps);
    m["phi_bandwidth"] = format_double(cfg.phi_bandwidth);
    m["ridge"] = format_double(cfg.ridge);
    m["kernel_count"] = std::to_string(cfg.kernel_count);
    m["embed_dim"] = std::to_string(cfg.embed_dim);
    m["stages"] = std::to_string(cfg.stages);
    m["folds"] = std::to_string(cfg.folds);
    m["k_neighbors"] = std::to_string(cfg.k_neighbors);
    m["repeats"] = std::to_string(cfg.repeats);
    m["classify_windows"] = std::to_string(cfg.classify_windows);
    m["classify_start"] = std::to_string(cfg.classify_start);
    m["strict"] = cfg.strict ? "1" : "0";
    m["synth.n_assets"] = std::to_string(cfg.synth.n_assets);
    m["synth.n_days"] = std::to_string(cfg.synth.n_days);
    m["synth.noise_scale"] = format_double(cfg.synth.noise_scale);
    m["synth.core_fraction"] = format_double(cfg.synth.core_fraction);
    m["synth.core_exposure"] = format_double(cfg.synth.core_exposure);
    m["synth.background_exposure"] = format_double(cfg.synth.background_exposure);
    m["synth.ar_coefficient"] = format_double(cfg.synth.ar_coefficient);
    std::string regimes;
    for (const auto& r : cfg.synth.regimes) {
        if (!regimes.empty()) regimes += ';';
        regimes += std::to_string(r.start_day) + ":" + std::to_string(r.end_day) + ":" +
                   format_double(r.loading);
    }
    m["synth.regimes"] = regimes;
    return m;
}

struct ManifestScope {
    const PipelineConfig& cfg;
    std::string stage;
    std::vector<std::string> inputs, outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ManifestScope(const PipelineConfig& c, std::string s) : cfg(c), stage(std::move(s)) {
        fs::create_directories(cfg.out_dir);
    }

    void commit() {
        const std::string manifest_path = path_in(cfg, "manifest.json");
        json manifest;
        if (fs::exists(manifest_path)) {
            std::ifstream in(manifest_path);
            in >> manifest;
        }
        json entry;
        entry["version"] = kVersion;
        entry["config"] = config_echo(cfg);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        entry["elapsed_seconds"] = elapsed;
        for (const auto& f : inputs) entry["inputs"][fs::path(f).filename().string()] = file_checksum(f);
        for (const auto& f : outputs)
            entry["outputs"][fs::path(f).filename().string()] = file_checksum(f);
        manifest["stages"][stage] = entry;
        std::ofstream out(manifest_path);
        out << manifest.dump(2) << '\n';
    }
};

void write_prices_csv(const std::string& path, const PriceTable& table) {
    std::ofstream out(path);
    out << "date";
    for (const auto& t : table.tickers) out << ',' << t;
    out << '\n';
    for (long i = 0; i < table.n_days(); ++i) {
        out << table.dates[i];
        for (long j = 0; j < table.n_assets(); ++j) out << ',' << format_double(table.prices(i, j));
        out << '\n';
    }
}

PriceTable read_prices(const PipelineConfig& cfg) {
    const std::string path = path_in(cfg, "prices.csv");
    require_file(path, "synth (or ingest)");
    std::ifstream in(path);
    return parse_prices(in, cfg.missing);
}

/// Concatenated per-snapshot matrices: header `t,ticker,<tickers...>`.
void write_snapshot_matrices(const std::string& path, const std::vector<std::string>& tickers,
                             const std::vector<int>& ts, const std::vector<Matrix>& matrices) {
    std::ofstream out(path);
    out << "t,ticker";
    for (const auto& t : tickers) out << ',' << t;
    out << '\n';
    for (std::size_t s = 0; s < ts.size(); ++s)
        for (long i = 0; i < matrices[s].rows(); ++i) {
            out << ts[s] << ',' << tickers[i];
            for (long j = 0; j < matrices[s].cols(); ++j)
                out << ',' << format_double(matrices[s](i, j));
            out << '\n';
        }
}

struct SnapshotFile {
    std::vector<std::string> tickers;
    std::vector<int> ts;
    std::vector<Matrix> matrices;
};

SnapshotFile read_snapshot_matrices(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty snapshot file " + path, 1);
    auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "t")
        throw parse_error("unexpected header in " + path, 1);
    SnapshotFile file;
    file.tickers.assign(header.begin() + 2, header.end());
    const long n = static_cast<long>(file.tickers.size());

    long lineno = 1, row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<long>(cells.size()) != n + 2)
            throw parse_error("bad column count in " + path, lineno);
        const int t = std::stoi(cells[0]);
        if (file.ts.empty() || file.ts.back() != t) {
            file.ts.push_back(t);
            file.matrices.emplace_back(Matrix::Zero(n, n));
            row = 0;
        }
        if (row >= n) throw parse_error("too many rows for snapshot t=" + cells[0], lineno);
        for (long j = 0; j < n; ++j) file.matrices.back()(row, j) = std::stod(cells[j + 2]);
        ++row;
    }
    return file;
}

struct EntropyFile {
    std::vector<std::string> tickers;
    int first_t = 0;
    std::vector<int> ts;
    std::vector<Vector> vectors;
};

EntropyFile read_entropy_vectors(const PipelineConfig& cfg) {
    const std::string path = path_in(cfg, "entropy_vectors.csv");
    require_file(path, "entropy");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    auto header = split_csv_line(line);
    EntropyFile file;
    file.tickers.assign(header.begin() + 1, header.end());
    const long n = static_cast<long>(file.tickers.size());
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<long>(cells.size()) != n + 1)
            throw parse_error("bad column count in entropy_vectors.csv", lineno);
        file.ts.push_back(std::stoi(cells[0]));
        Vector v(n);
        for (long j = 0; j < n; ++j) v(j) = std::stod(cells[j + 1]);
        file.vectors.push_back(std::move(v));
    }
    if (file.ts.empty()) throw parse_error("entropy_vectors.csv has no rows", lineno);
    file.first_t = file.ts.front();
    return file;
}

KernelMatrix read_gram(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    auto header = split_csv_line(line);
    KernelMatrix k;
    k.labels.assign(header.begin() + 1, header.end());
    const long n = static_cast<long>(k.labels.size());
    k.values.resize(n, n);
    for (long i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw parse_error("truncated gram file " + path, i + 2);
        auto cells = split_csv_line(line);
        if (static_cast<long>(cells.size()) != n + 1)
            throw parse_error("bad column count in " + path, i + 2);
        for (long j = 0; j < n; ++j) k.values(i, j) = std::stod(cells[j + 1]);
    }
    return k;
}

std::vector<EntropySeries> build_series(const EntropyFile& file, const std::vector<int>& ts,
                                        int w) {
    std::vector<EntropySeries> series;
    series.reserve(ts.size());
    for (int t : ts) series.push_back(entropy_series(file.vectors, file.first_t, t, w));
    return series;
}

void write_gram(const std::string& path, const KernelMatrix& k) {
    std::ofstream out(path);
    write_labeled_matrix_csv(out, k.values, k.labels, "window");
}

void write_embedding_svg(const std::string& path, const Matrix& points) {
    std::ofstream out(path);
    const long n = points.rows();
    double xmin = points.col(0).minCoeff(), xmax = points.col(0).maxCoeff();
    double ymin = 0, ymax = 0;
    if (points.cols() > 1) {
        ymin = points.col(1).minCoeff();
        ymax = points.col(1).maxCoeff();
    }
    const double dx = xmax > xmin ? xmax - xmin : 1.0;
    const double dy = ymax > ymin ? ymax - ymin : 1.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    for (long i = 0; i < n; ++i) {
        const double x = 20 + 600 * (points(i, 0) - xmin) / dx;
        const double y = points.cols() > 1 ? 620 - 600 * (points(i, 1) - ymin) / dy : 320.0;
        const int hue = static_cast<int>(240.0 * i / std::max<long>(1, n - 1));
        out << "<circle cx=\"" << format_double(x) << "\" cy=\"" << format_double(y)
            << "\" r=\"4\" fill=\"hsl(" << hue << ",80%,45%)\"/>\n";
    }
    out << "</svg>\n";
}

// ---- stages ----------------------------------------------------------------

void stage_synth(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "synth");
    SynthConfig synth = cfg.synth;
    synth.seed = cfg.seed;
    const PriceTable table = synth_market(synth);
    const std::string out = path_in(cfg, "prices.csv");
    write_prices_csv(out, table);
    scope.outputs = {out};
    scope.commit();
}

void stage_ingest(const PipelineConfig& cfg) {
    if (cfg.input.empty()) throw config_error("ingest requires `input` to point at a CSV file");
    require_file(cfg.input, "n/a; supply the input file");
    ManifestScope scope(cfg, "ingest");
    std::ifstream in(cfg.input);
    const PriceTable table = parse_prices(in, cfg.missing);
    const std::string out = path_in(cfg, "prices.csv");
    write_prices_csv(out, table);
    scope.inputs = {cfg.input};
    scope.outputs = {out};
    scope.commit();
}

void stage_networks(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "networks");
    const PriceTable table = read_prices(cfg);
    const auto snaps = build_network_sequence(table, cfg.width);
    std::vector<int> ts;
    std::vector<Matrix> mats;
    for (const auto& s : snaps) {
        ts.push_back(s.t);
        mats.push_back(s.adjacency);
    }
    const std::string out = path_in(cfg, "networks.csv");
    write_snapshot_matrices(out, table.tickers, ts, mats);
    scope.inputs = {path_in(cfg, "prices.csv")};
    scope.outputs = {out};
    scope.commit();
}

void stage_commute(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "commute");
    const std::string in_path = path_in(cfg, "networks.csv");
    require_file(in_path, "networks");
    const SnapshotFile nets = read_snapshot_matrices(in_path);

    CommuteOptions opts;
    opts.ridge = cfg.ridge;
    std::vector<Matrix> commutes(nets.ts.size());
    parallel_for(static_cast<long>(nets.ts.size()), [&](long i) {
        commutes[i] = commute_time_spectral(nets.matrices[i], opts).values;
    });
    const std::string out = path_in(cfg, "commute.csv");
    write_snapshot_matrices(out, nets.tickers, nets.ts, commutes);
    scope.inputs = {in_path};
    scope.outputs = {out};
    scope.commit();
}

void stage_entropy(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "entropy");
    const std::string in_path = path_in(cfg, "commute.csv");
    require_file(in_path, "commute");
    const SnapshotFile commutes = read_snapshot_matrices(in_path);
    const long count = static_cast<long>(commutes.ts.size());

    std::vector<DominantDistribution> dists(count);
    std::vector<Vector> subents(count);
    parallel_for(count, [&](long i) {
        CommuteTimeMatrix c;
        c.values = commutes.matrices[i];
        c.volume = 0.0;  // not needed by the affinity transform
        const Matrix w = affinity_transform(c, cfg.affinity, cfg.sigma);
        dists[i] = dominant_distribution(w, cfg.replicator);
        subents[i] = sub_entropies(dists[i]);
    });
    if (cfg.strict)
        for (long i = 0; i < count; ++i)
            if (!dists[i].converged)
                throw degenerate_state_error("replicator did not converge at t=" +
                                             std::to_string(commutes.ts[i]));

    const std::string trace_path = path_in(cfg, "entropy.csv");
    {
        std::ofstream out(trace_path);
        out << "t,H_S,S1_size\n";
        for (long i = 0; i < count; ++i)
            out << commutes.ts[i] << ',' << format_double(shannon_entropy(dists[i].a)) << ','
                << dists[i].support.size() << '\n';
    }
    const std::string vec_path = path_in(cfg, "entropy_vectors.csv");
    {
        std::ofstream out(vec_path);
        out << "t";
        for (const auto& t : commutes.tickers) out << ',' << t;
        out << '\n';
        for (long i = 0; i < count; ++i) {
            out << commutes.ts[i];
            for (long j = 0; j < subents[i].size(); ++j) out << ',' << format_double(subents[i](j));
            out << '\n';
        }
    }
    scope.inputs = {in_path};
    scope.outputs = {trace_path, vec_path};
    scope.commit();
}

std::vector<int> kernel_window_ts(const EntropyFile& file, const PipelineConfig& cfg) {
    const int first_valid = file.first_t + cfg.entropy_window - 1;
    const int last = file.ts.back();
    if (first_valid > last)
        throw shape_error("entropy window longer than the available entropy history");
    const int avail = last - first_valid + 1;
    const int count = std::min(cfg.kernel_count, avail);
    std::vector<int> ts;
    ts.reserve(count);
    for (int i = 0; i < count; ++i) {
        // evenly spaced, endpoints included
        const long t = first_valid +
                       (count == 1 ? 0 : static_cast<long>(i) * (avail - 1) / (count - 1));
        ts.push_back(static_cast<int>(t));
    }
    return ts;
}

void stage_kernel(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "kernel");
    const EntropyFile file = read_entropy_vectors(cfg);
    const auto ts = kernel_window_ts(file, cfg);
    const auto series = build_series(file, ts, cfg.entropy_window);

    GakOptions opts;
    opts.bandwidth = cfg.phi_bandwidth;
    const KernelMatrix gram = kernel_matrix(series, opts);
    const KernelMatrix normalized = normalize_kernel(gram);

    const std::string raw_path = path_in(cfg, "gram.csv");
    const std::string norm_path = path_in(cfg, "gram_normalized.csv");
    const std::string long_path = path_in(cfg, "gram_long.csv");
    write_gram(raw_path, gram);
    write_gram(norm_path, normalized);
    {
        std::ofstream out(long_path);
        out << "p,q,value\n";
        for (long p = 0; p < normalized.size(); ++p)
            for (long q = 0; q < normalized.size(); ++q)
                out << normalized.labels[p] << ',' << normalized.labels[q] << ','
                    << format_double(normalized.values(p, q)) << '\n';
    }
    scope.inputs = {path_in(cfg, "entropy_vectors.csv")};
    scope.outputs = {raw_path, norm_path, long_path};
    scope.commit();
}

void stage_embed(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "embed");
    const std::string in_path = path_in(cfg, "gram_normalized.csv");
    require_file(in_path, "kernel");
    const KernelMatrix gram = read_gram(in_path);
    const Embedding emb = kpca(gram, cfg.embed_dim);

    const std::string out_path = path_in(cfg, "embedding.csv");
    {
        std::ofstream out(out_path);
        out << "label";
        for (long d = 0; d < emb.points.cols(); ++d) out << ",x" << (d + 1);
        out << '\n';
        for (long i = 0; i < emb.points.rows(); ++i) {
            out << emb.labels[i];
            for (long d = 0; d < emb.points.cols(); ++d)
                out << ',' << format_double(emb.points(i, d));
            out << '\n';
        }
    }
    const std::string svg_path = path_in(cfg, "embedding.svg");
    write_embedding_svg(svg_path, emb.points);
    scope.inputs = {in_path};
    scope.outputs = {out_path, svg_path};
    scope.commit();
}

void stage_stress(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "stress");
    const std::string in_path = path_in(cfg, "embedding.csv");
    require_file(in_path, "embed");
    std::ifstream in(in_path);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        std::vector<double> row;
        for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(std::stod(cells[j]));
        rows.push_back(std::move(row));
    }
    Matrix points(static_cast<long>(rows.size()), rows.empty() ? 0 : static_cast<long>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) points(i, j) = rows[i][j];

    const double ds = distance_stress(points);
    const std::string out_path = path_in(cfg, "stress.txt");
    {
        std::ofstream out(out_path);
        out << "DS=" << format_double(ds) << '\n';
    }
    scope.inputs = {in_path};
    scope.outputs = {out_path};
    scope.commit();
}

void stage_classify(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "classify");
    const EntropyFile file = read_entropy_vectors(cfg);
    const int first_valid = file.first_t + cfg.entropy_window - 1;
    const int start = cfg.classify_start < 0 ? first_valid : cfg.classify_start;
    if (start < first_valid) throw config_error("classify_start precedes the first valid window");
    if (start + cfg.classify_windows - 1 > file.ts.back())
        throw shape_error("not enough windows for classification from t=" + std::to_string(start));

    std::vector<int> ts(cfg.classify_windows);
    for (int i = 0; i < cfg.classify_windows; ++i) ts[i] = start + i;
    const auto series = build_series(file, ts, cfg.entropy_window);

    GakOptions opts;
    opts.bandwidth = cfg.phi_bandwidth;
    StagedDataset ds;
    ds.kernel = normalize_kernel(kernel_matrix(series, opts));
    ds.labels = stage_labels(cfg.classify_windows, cfg.stages);
    const CrossValResult res =
        cross_validate(ds, cfg.k_neighbors, cfg.folds, cfg.repeats, cfg.seed);

    const std::string csv_path = path_in(cfg, "classification.csv");
    {
        std::ofstream out(csv_path);
        out << "repeat,fold,accuracy\n";
        for (const auto& r : res.records)
            out << r.repeat << ',' << r.fold << ',' << format_double(r.accuracy) << '\n';
    }
    const std::string summary_path = path_in(cfg, "classification_summary.txt");
    {
        std::ofstream out(summary_path);
        out << "accuracy=" << format_double(res.mean_accuracy) << "+-"
            << format_double(res.std_error) << '\n';
        out << "classifier=rkhs-knn k=" << cfg.k_neighbors << " (kernel-space nearest neighbors)\n";
    }
    scope.inputs = {path_in(cfg, "entropy_vectors.csv")};
    scope.outputs = {csv_path, summary_path};
    scope.commit();
}

void stage_report(const PipelineConfig& cfg) {
    ManifestScope scope(cfg, "report");
    const std::string entropy_path = path_in(cfg, "entropy.csv");
    const std::string stress_path = path_in(cfg, "stress.txt");
    const std::string summary_path = path_in(cfg, "classification_summary.txt");
    require_file(entropy_path, "entropy");
    require_file(stress_path, "stress");
    require_file(summary_path, "classify");

    const std::string out_path = path_in(cfg, "report.txt");
    std::ofstream out(out_path);
    out << "# entropy trace\n" << std::ifstream(entropy_path).rdbuf();
    out << "# distance stress\n" << std::ifstream(stress_path).rdbuf();
    out << "# classification\n" << std::ifstream(summary_path).rdbuf();
    scope.inputs = {entropy_path, stress_path, summary_path};
    scope.outputs = {out_path};
    scope.commit();
}

}  // namespace

void PipelineConfig::validate() const {
    synth.validate();
    if (width < 2) throw config_error("width must be >= 2");
    if (entropy_window < 1) throw config_error("entropy_window must be >= 1");
    if (!(replicator.tol > 0.0)) throw config_error("tol must be positive");
    if (replicator.max_iter < 1) throw config_error("max_iter must be >= 1");
    if (replicator.support_eps < 0.0) throw config_error("support_eps must be >= 0");
    if (sigma && !(*sigma > 0.0)) throw config_error("sigma must be positive");
    if (!(phi_bandwidth > 0.0)) throw config_error("phi_bandwidth must be positive");
    if (ridge < 0.0) throw config_error("ridge must be >= 0");
    if (kernel_count < 2) throw config_error("kernel_count must be >= 2");
    if (embed_dim < 1) throw config_error("embed_dim must be >= 1");
    if (stages < 1 || folds < 2 || k_neighbors < 1 || repeats < 1)
        throw config_error("classification parameters out of range");
    if (classify_windows < stages || classify_windows % stages != 0)
        throw config_error("classify_windows must be a positive multiple of stages");
    if (out_dir.empty()) throw config_error("out_dir must not be empty");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    PipelineConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + " is not key=value");
        apply_override(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

void apply_override(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    auto to_int = [&](const std::string& v) {
        try {
            std::size_t pos;
            int r = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return r;
        } catch (const std::exception&) {
            throw config_error("bad integer for " + key + ": '" + v + "'");
        }
    };
    auto to_double = [&](const std::string& v) {
        try {
            std::size_t pos;
            double r = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return r;
        } catch (const std::exception&) {
            throw config_error("bad number for " + key + ": '" + v + "'");
        }
    };

    if (key == "input") cfg.input = value;
    else if (key == "missing") {
        if (value == "reject") cfg.missing = MissingPolicy::Reject;
        else if (value == "forward-fill") cfg.missing = MissingPolicy::ForwardFill;
        else throw config_error("missing must be reject or forward-fill");
    } else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "width") cfg.width = to_int(value);
    else if (key == "entropy_window") cfg.entropy_window = to_int(value);
    else if (key == "affinity") cfg.affinity = affinity_mode_from_string(value);
    else if (key == "sigma") cfg.sigma = value == "auto" ? std::optional<double>{} : std::optional<double>{to_double(value)};
    else if (key == "tol") cfg.replicator.tol = to_double(value);
    else if (key == "max_iter") cfg.replicator.max_iter = to_int(value);
    else if (key == "support_eps") cfg.replicator.support_eps = to_double(value);
    else if (key == "phi_bandwidth") cfg.phi_bandwidth = to_double(value);
    else if (key == "ridge") cfg.ridge = to_double(value);
    else if (key == "kernel_count") cfg.kernel_count = to_int(value);
    else if (key == "embed_dim") cfg.embed_dim = to_int(value);
    else if (key == "stages") cfg.stages = to_int(value);
    else if (key == "folds") cfg.folds = to_int(value);
    else if (key == "k_neighbors") cfg.k_neighbors = to_int(value);
    else if (key == "repeats") cfg.repeats = to_int(value);
    else if (key == "classify_windows") cfg.classify_windows = to_int(value);
    else if (key == "classify_start") cfg.classify_start = to_int(value);
    else if (key == "strict") cfg.strict = value == "1" || value == "true";
    else if (key == "synth.n_assets") cfg.synth.n_assets = to_int(value);
    else if (key == "synth.n_days") cfg.synth.n_days = to_int(value);
    else if (key == "synth.noise_scale") cfg.synth.noise_scale = to_double(value);
    else if (key == "synth.core_fraction") cfg.synth.core_fraction = to_double(value);
    else if (key == "synth.core_exposure") cfg.synth.core_exposure = to_double(value);
    else if (key == "synth.background_exposure") cfg.synth.background_exposure = to_double(value);
    else if (key == "synth.ar_coefficient") cfg.synth.ar_coefficient = to_double(value);
    else if (key == "synth.regimes") {
        cfg.synth.regimes.clear();
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ';')) {
            if (item.empty()) continue;
            Regime r;
            if (std::sscanf(item.c_str(), "%d:%d:%lf", &r.start_day, &r.end_day, &r.loading) != 3)
                throw config_error("regime entry must be start:end:loading, got '" + item + "'");
            cfg.synth.regimes.push_back(r);
        }
    } else {
        throw config_error("unknown config key '" + key + "'");
    }
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw prerequisite_error("cannot read file for checksum: " + path);
    std::uint64_t hash = 14695981039346656037ULL;  // FNV-1a offset basis
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char out[20];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

int thread_count() {
    if (const char* env = std::getenv("EDTWK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(long n, const std::function<void(long)>& body) {
    const int workers = std::min<long>(thread_count(), n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void run_subcommand(const std::string& name, const PipelineConfig& cfg) {
    cfg.validate();
    if (name == "synth") stage_synth(cfg);
    else if (name == "ingest") stage_ingest(cfg);
    else if (name == "networks") stage_networks(cfg);
    else if (name == "commute") stage_commute(cfg);
    else if (name == "entropy") stage_entropy(cfg);
    else if (name == "kernel") stage_kernel(cfg);
    else if (name == "embed") stage_embed(cfg);
    else if (name == "stress") stage_stress(cfg);
    else if (name == "classify") stage_classify(cfg);
    else if (name == "report") stage_report(cfg);
    else throw config_error("unknown subcommand '" + name + "'");
}

}  // namespace edtwk
