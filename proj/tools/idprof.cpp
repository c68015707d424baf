// idprof command-line front end. Talks to the library only through the C API.

#include <idprof/idprof.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace fs = std::filesystem;

namespace {

struct CliError {
    std::string name;
    std::string message;
};

void check(idprof_status status) {
    if (status != IDPROF_OK) throw CliError{idprof_status_name(status), idprof_last_error()};
}

struct StringDeleter {
    void operator()(char* s) const { idprof_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
    void operator()(T* p) const { Free(p); }
};
using Cloud = std::unique_ptr<idprof_cloud, HandleDeleter<idprof_cloud, idprof_cloud_free>>;
using Manifest = std::unique_ptr<idprof_manifest, HandleDeleter<idprof_manifest, idprof_manifest_free>>;
using Curve = std::unique_ptr<idprof_curve, HandleDeleter<idprof_curve, idprof_curve_free>>;
using Records = std::unique_ptr<idprof_records, HandleDeleter<idprof_records, idprof_records_free>>;
using Correlation = std::unique_ptr<idprof_correlation, HandleDeleter<idprof_correlation, idprof_correlation_free>>;
using Sweep = std::unique_ptr<idprof_sweep, HandleDeleter<idprof_sweep, idprof_sweep_free>>;

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError{"IoError", "cannot write " + path.string()};
    out << text;
    if (!out) throw CliError{"IoError", "write failed for " + path.string()};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{"IoError", "cannot open " + path.string()};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw CliError{"IoError", "cannot create output directory " + dir.string()};
}

struct EstimatorFlags {
    unsigned k = 20;
    std::string aggregation = "mackay";
    std::uint64_t subsample = 0;
    std::uint64_t seed = 0;
    std::uint64_t bootstrap = 0;
    std::uint64_t bootstrap_seed = 0;
    bool bootstrap_seed_set = false;
    double jitter = 0.0;
    unsigned threads = 0;

    void attach(CLI::App* app) {
        app->add_option("--k", k, "Neighbour count k (>= 2)")->capture_default_str();
        app->add_option("--agg", aggregation, "Aggregation of local estimates")
            ->check(CLI::IsMember({"mackay", "levina"}))
            ->capture_default_str();
        app->add_option("--subsample", subsample, "Estimate from M query rows drawn without replacement (0 = all rows)");
        app->add_option("--seed", seed, "Seed for subsampling, jitter and (by default) bootstrap")->capture_default_str();
        app->add_option("--bootstrap", bootstrap, "Bootstrap rounds over query rows for a spread (0 = off)");
        app->add_option_function<std::uint64_t>(
            "--bootstrap-seed",
            [this](const std::uint64_t& v) {
                bootstrap_seed = v;
                bootstrap_seed_set = true;
            },
            "Seed for bootstrap resampling (defaults to --seed)");
        app->add_option("--jitter", jitter, "Add seeded uniform noise in [-EPS, EPS] before estimation (0 = off)");
        app->add_option("--threads", threads, "Worker cap for the kNN kernel (0 = all cores); results do not change");
    }

    idprof_estimator_config config() const {
        idprof_estimator_config c;
        idprof_estimator_config_init(&c);
        c.k = k;
        c.aggregation = aggregation == "levina" ? IDPROF_AGG_LEVINA : IDPROF_AGG_MACKAY;
        if (subsample > 0) {
            c.use_subsample = 1;
            c.subsample_m = subsample;
            c.subsample_seed = seed;
        }
        if (bootstrap > 0) {
            c.use_bootstrap = 1;
            c.bootstrap_rounds = bootstrap;
            c.bootstrap_seed = bootstrap_seed_set ? bootstrap_seed : seed;
        }
        if (jitter > 0.0) {
            c.use_jitter = 1;
            c.jitter_epsilon = jitter;
            c.jitter_seed = seed;
        }
        c.threads = threads;
        return c;
    }
};

std::set<std::string> format_set(const std::vector<std::string>& formats) {
    return std::set<std::string>(formats.begin(), formats.end());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"idprof: intrinsic-dimension estimation and layer-wise profiling"};
    app.require_subcommand(1);
    app.set_version_flag("--version", idprof_version());

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Estimate the intrinsic dimension of one NPY point cloud");
    std::string est_input;
    std::string est_out;
    std::string est_dataset;
    std::string est_domain;
    EstimatorFlags est_flags;
    estimate->add_option("npy", est_input, "N x D NPY file (float32 or float64)")->required();
    est_flags.attach(estimate);
    estimate->add_option("--dataset-id", est_dataset, "Tag the estimate as this dataset's d_data");
    estimate->add_option("--domain", est_domain, "Dataset domain for a d_data record")
        ->check(CLI::IsMember({"natural", "medical"}));
    estimate->add_option("--out", est_out, "Write estimate.json here instead of stdout");

    // profile
    auto* profile = app.add_subcommand("profile", "Estimate the ID of every layer in a manifest and find the peak");
    std::string prof_manifest;
    std::string prof_out = ".";
    std::vector<std::string> prof_formats{"json", "csv"};
    EstimatorFlags prof_flags;
    profile->add_option("manifest", prof_manifest, "Layer manifest JSON")->required();
    prof_flags.attach(profile);
    profile->add_option("--out", prof_out, "Output directory")->capture_default_str();
    profile->add_option("--formats", prof_formats, "Outputs: profile.json, curve.csv, curve.svg")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "csv", "svg"}))
        ->capture_default_str();

    // correlate
    auto* correlate = app.add_subcommand("correlate", "Correlate peak representation ID with dataset ID");
    std::string corr_dir;
    std::string corr_out = ".";
    std::vector<std::string> corr_formats{"json", "csv"};
    correlate->add_option("records", corr_dir, "Directory of profile/peak/estimate JSON records")->required();
    correlate->add_option("--out", corr_out, "Output directory")->capture_default_str();
    correlate->add_option("--formats", corr_formats,
                          "Outputs: correlation.json + peaks.json, correlation.csv + peaks.csv, correlation.svg")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "csv", "svg"}))
        ->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Per-domain peak statistics for each training-set size");
    std::string sweep_root;
    std::string sweep_out = ".";
    std::vector<std::string> sweep_formats{"csv"};
    sweep->add_option("root", sweep_root, "Directory with one records directory per N (500, N500, N=500)")->required();
    sweep->add_option("--out", sweep_out, "Output directory")->capture_default_str();
    sweep->add_option("--formats", sweep_formats, "Outputs: sweep.csv, sweep.json")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate ground-truth point clouds or a layer stack");
    std::string synth_spec;
    std::string synth_out;
    synth->add_option("spec", synth_spec, "Synth spec JSON file")->required();
    synth->add_option("--out", synth_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*estimate) {
            Cloud cloud;
            {
                idprof_cloud* raw = nullptr;
                check(idprof_cloud_load_npy(est_input.c_str(), &raw));
                cloud.reset(raw);
            }
            const idprof_estimator_config config = est_flags.config();
            idprof_estimate result;
            check(idprof_estimate_id(cloud.get(), &config, &result));
            char* raw_json = nullptr;
            check(idprof_estimate_render_json(&result, &config, est_input.c_str(),
                                              est_dataset.empty() ? nullptr : est_dataset.c_str(),
                                              est_domain.empty() ? nullptr : est_domain.c_str(), &raw_json));
            const OwnedString text(raw_json);
            if (est_out.empty()) {
                std::cout << text.get();
            } else {
                ensure_dir(est_out);
                write_file(fs::path(est_out) / "estimate.json", text.get());
            }
        } else if (*profile) {
            Manifest manifest;
            {
                idprof_manifest* raw = nullptr;
                check(idprof_manifest_load(prof_manifest.c_str(), &raw));
                manifest.reset(raw);
            }
            const idprof_estimator_config config = prof_flags.config();
            Curve curve;
            {
                idprof_curve* raw = nullptr;
                check(idprof_curve_compute(manifest.get(), &config, &raw));
                curve.reset(raw);
            }
            for (std::uint64_t i = 0; i < idprof_curve_size(curve.get()); ++i) {
                idprof_curve_point point;
                check(idprof_curve_point_at(curve.get(), i, &point));
                if (!point.has_value) {
                    std::cerr << "warning: layer " << point.index << " failed and is excluded from the peak\n";
                }
            }
            ensure_dir(prof_out);
            const auto formats = format_set(prof_formats);
            const std::pair<const char*, idprof_format> outputs[] = {
                {"json", IDPROF_FORMAT_JSON}, {"csv", IDPROF_FORMAT_CSV}, {"svg", IDPROF_FORMAT_SVG}};
            const char* names[] = {"profile.json", "curve.csv", "curve.svg"};
            for (std::size_t i = 0; i < 3; ++i) {
                if (!formats.count(outputs[i].first)) continue;
                char* raw = nullptr;
                check(idprof_curve_render(curve.get(), outputs[i].second, &raw));
                const OwnedString text(raw);
                write_file(fs::path(prof_out) / names[i], text.get());
            }
        } else if (*correlate) {
            Records records;
            {
                idprof_records* raw = nullptr;
                check(idprof_records_load_dir(corr_dir.c_str(), &raw));
                records.reset(raw);
            }
            Correlation corr;
            {
                idprof_correlation* raw = nullptr;
                check(idprof_correlate(records.get(), &raw));
                corr.reset(raw);
            }
            ensure_dir(corr_out);
            const auto formats = format_set(corr_formats);
            auto emit = [&](const char* file, idprof_status status, char* raw) {
                const OwnedString text(raw);
                check(status);
                write_file(fs::path(corr_out) / file, text.get());
            };
            char* raw = nullptr;
            if (formats.count("json")) {
                idprof_status s = idprof_correlation_render(corr.get(), IDPROF_FORMAT_JSON, &raw);
                emit("correlation.json", s, raw);
                s = idprof_records_render_peaks(records.get(), IDPROF_FORMAT_JSON, &raw);
                emit("peaks.json", s, raw);
            }
            if (formats.count("csv")) {
                idprof_status s = idprof_correlation_render(corr.get(), IDPROF_FORMAT_CSV, &raw);
                emit("correlation.csv", s, raw);
                s = idprof_records_render_peaks(records.get(), IDPROF_FORMAT_CSV, &raw);
                emit("peaks.csv", s, raw);
            }
            if (formats.count("svg")) {
                const idprof_status s = idprof_correlation_render(corr.get(), IDPROF_FORMAT_SVG, &raw);
                emit("correlation.svg", s, raw);
            }
        } else if (*sweep) {
            Sweep table;
            {
                idprof_sweep* raw = nullptr;
                check(idprof_sweep_load_root(sweep_root.c_str(), &raw));
                table.reset(raw);
            }
            ensure_dir(sweep_out);
            const auto formats = format_set(sweep_formats);
            char* raw = nullptr;
            if (formats.count("csv")) {
                check(idprof_sweep_render(table.get(), IDPROF_FORMAT_CSV, &raw));
                const OwnedString text(raw);
                write_file(fs::path(sweep_out) / "sweep.csv", text.get());
            }
            if (formats.count("json")) {
                check(idprof_sweep_render(table.get(), IDPROF_FORMAT_JSON, &raw));
                const OwnedString text(raw);
                write_file(fs::path(sweep_out) / "sweep.json", text.get());
            }
        } else if (*synth) {
            const std::string spec = read_file(synth_spec);
            char* raw = nullptr;
            check(idprof_synth_run(spec.c_str(), synth_out.c_str(), &raw));
            const OwnedString summary(raw);
            std::cout << summary.get();
        }
    } catch (const CliError& e) {
        std::cerr << "{\"error\": \"" << json_escape(e.name) << "\", \"message\": \"" << json_escape(e.message)
                  << "\"}\n";
        return 1;
    }
    return 0;
}
