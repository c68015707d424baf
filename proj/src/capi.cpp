// extern "C" surface over the C++ core. Every entry point funnels exceptions
// through guard(), which records the message and maps the error code.

#include <idprof/idprof.h>

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "error.hpp"
#include "idcore.hpp"
#include "neighbors.hpp"
#include "npy.hpp"
#include "profile.hpp"
#include "records.hpp"
#include "report.hpp"
#include "synth.hpp"

struct idprof_cloud {
    idprof::PointCloud cloud;
};

struct idprof_manifest {
    idprof::profile::LayerManifest manifest;
};

struct idprof_curve {
    idprof::profile::IDCurve curve;
};

struct idprof_records {
    std::vector<idprof::analysis::DatasetRecord> records;
};

struct idprof_correlation {
    idprof::analysis::CorrelationReport report;
};

struct idprof_sweep {
    std::vector<idprof::analysis::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

idprof_status fail(idprof_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename Fn>
idprof_status guard(Fn&& fn) noexcept {
    try {
        g_last_error.clear();
        fn();
        return IDPROF_OK;
    } catch (const idprof::Error& e) {
        return fail(static_cast<idprof_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(IDPROF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(IDPROF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(IDPROF_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw idprof::Error(idprof::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

idprof::idcore::EstimatorConfig to_config(const idprof_estimator_config* c) {
    idprof::idcore::EstimatorConfig out;
    out.k = c->k;
    switch (c->aggregation) {
        case IDPROF_AGG_MACKAY: out.aggregation = idprof::idcore::Aggregation::MacKay; break;
        case IDPROF_AGG_LEVINA: out.aggregation = idprof::idcore::Aggregation::Levina; break;
        default: throw idprof::Error(idprof::ErrorCode::InvalidArgument, "unknown aggregation mode");
    }
    if (c->use_subsample) out.subsample = idprof::idcore::Subsample{c->subsample_m, c->subsample_seed};
    if (c->use_bootstrap) out.bootstrap = idprof::idcore::Bootstrap{c->bootstrap_rounds, c->bootstrap_seed};
    if (c->use_jitter) out.jitter = idprof::idcore::Jitter{c->jitter_epsilon, c->jitter_seed};
    out.threads = c->threads;
    return out;
}

void fill_estimate(const idprof::idcore::IDEstimate& est, idprof_estimate* out) {
    out->value = est.value;
    out->n_used = est.n_used;
    out->has_spread = est.spread.has_value() ? 1 : 0;
    out->spread = est.spread.value_or(0.0);
}

void fill_peak(const idprof::profile::PeakSummary& p, idprof_peak* out) {
    out->i_star = p.i_star;
    out->d_max = p.d_max;
    out->rel_depth = p.rel_depth;
}

}  // namespace

extern "C" {

IDPROF_API const char* idprof_status_name(idprof_status status) {
    switch (status) {
        case IDPROF_OK: return "Ok";
        case IDPROF_ERR_INTERNAL: return "InternalError";
        default: break;
    }
    const int code = static_cast<int>(status);
    if (code >= static_cast<int>(idprof::ErrorCode::InvalidArgument) &&
        code <= static_cast<int>(idprof::ErrorCode::SpecInvalid)) {
        // error_name returns views of string literals.
        return idprof::error_name(static_cast<idprof::ErrorCode>(code)).data();
    }
    return "Unknown";
}

IDPROF_API const char* idprof_last_error(void) { return g_last_error.c_str(); }

IDPROF_API const char* idprof_version(void) { return "0.1.0"; }

IDPROF_API void idprof_string_free(char* s) { std::free(s); }

IDPROF_API void idprof_estimator_config_init(idprof_estimator_config* config) {
    if (config == nullptr) return;
    *config = idprof_estimator_config{};
    config->k = 20;
    config->aggregation = IDPROF_AGG_MACKAY;
}

IDPROF_API idprof_status idprof_cloud_create(const double* data, uint64_t rows, uint64_t cols, idprof_cloud** out) {
    return guard([&] {
        require(out, "out");
        *out = nullptr;
        if (rows != 0 && cols != 0) require(data, "data");
        std::vector<double> values(data, data + rows * cols);
        *out = new idprof_cloud{idprof::PointCloud(rows, cols, std::move(values))};
    });
}

IDPROF_API idprof_status idprof_cloud_load_npy(const char* path, idprof_cloud** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new idprof_cloud{idprof::npy::load(path)};
    });
}

IDPROF_API idprof_status idprof_cloud_save_npy(const idprof_cloud* cloud, const char* path, int single_precision) {
    return guard([&] {
        require(cloud, "cloud");
        require(path, "path");
        idprof::npy::save(path, cloud->cloud,
                          single_precision ? idprof::Precision::Single : idprof::Precision::Double);
    });
}

IDPROF_API uint64_t idprof_cloud_rows(const idprof_cloud* cloud) { return cloud ? cloud->cloud.rows() : 0; }

IDPROF_API uint64_t idprof_cloud_cols(const idprof_cloud* cloud) { return cloud ? cloud->cloud.cols() : 0; }

IDPROF_API idprof_status idprof_cloud_copy(const idprof_cloud* cloud, double* out, uint64_t capacity) {
    return guard([&] {
        require(cloud, "cloud");
        require(out, "out");
        const auto values = cloud->cloud.to_double();
        if (capacity < values.size()) throw idprof::Error(idprof::ErrorCode::InvalidArgument, "output buffer too small");
        std::memcpy(out, values.data(), values.size() * sizeof(double));
    });
}

IDPROF_API void idprof_cloud_free(idprof_cloud* cloud) { delete cloud; }

IDPROF_API idprof_status idprof_knn_distances(const idprof_cloud* cloud, uint32_t k, uint32_t threads, double* out,
                                              uint64_t capacity) {
    return guard([&] {
        require(cloud, "cloud");
        require(out, "out");
        const auto table = idprof::neighbors::knn_distances(cloud->cloud, k, {threads});
        if (capacity < table.dists.size()) throw idprof::Error(idprof::ErrorCode::InvalidArgument, "output buffer too small");
        std::memcpy(out, table.dists.data(), table.dists.size() * sizeof(double));
    });
}

IDPROF_API idprof_status idprof_local_mle(const double* row, uint64_t length, uint32_t k, double* out) {
    return guard([&] {
        require(row, "row");
        require(out, "out");
        *out = idprof::idcore::local_mle(std::span<const double>(row, length), k);
    });
}

IDPROF_API idprof_status idprof_aggregate(const double* locals, uint64_t count, idprof_aggregation mode, double* out) {
    return guard([&] {
        require(out, "out");
        if (count != 0) require(locals, "locals");
        const auto agg = mode == IDPROF_AGG_LEVINA ? idprof::idcore::Aggregation::Levina
                                                   : idprof::idcore::Aggregation::MacKay;
        *out = idprof::idcore::aggregate(std::span<const double>(locals, count), agg);
    });
}

IDPROF_API idprof_status idprof_estimate_id(const idprof_cloud* cloud, const idprof_estimator_config* config,
                                            idprof_estimate* out) {
    return guard([&] {
        require(cloud, "cloud");
        require(config, "config");
        require(out, "out");
        fill_estimate(idprof::idcore::estimate_id(cloud->cloud, to_config(config)), out);
    });
}

IDPROF_API idprof_status idprof_estimate_render_json(const idprof_estimate* estimate,
                                                     const idprof_estimator_config* config, const char* source,
                                                     const char* dataset_id, const char* domain, char** out_json) {
    return guard([&] {
        require(estimate, "estimate");
        require(config, "config");
        require(out_json, "out_json");
        *out_json = nullptr;
        idprof::idcore::IDEstimate est;
        est.value = estimate->value;
        est.n_used = estimate->n_used;
        if (estimate->has_spread) est.spread = estimate->spread;
        est.config = to_config(config);
        std::string domain_text = domain ? domain : "";
        if (!domain_text.empty()) {
            domain_text = std::string(idprof::analysis::domain_name(idprof::analysis::parse_domain(domain_text)));
        }
        const auto j = idprof::report::estimate_to_json(est, source ? source : "", dataset_id ? dataset_id : "",
                                                        domain_text);
        *out_json = copy_string(idprof::report::dump(j));
    });
}

IDPROF_API idprof_status idprof_manifest_load(const char* path, idprof_manifest** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new idprof_manifest{idprof::profile::load_manifest(path)};
    });
}

IDPROF_API uint64_t idprof_manifest_layer_count(const idprof_manifest* manifest) {
    return manifest ? manifest->manifest.layer_count : 0;
}

IDPROF_API uint64_t idprof_manifest_rows(const idprof_manifest* manifest) {
    return manifest ? manifest->manifest.rows : 0;
}

IDPROF_API void idprof_manifest_free(idprof_manifest* manifest) { delete manifest; }

IDPROF_API idprof_status idprof_curve_compute(const idprof_manifest* manifest, const idprof_estimator_config* config,
                                              idprof_curve** out) {
    return guard([&] {
        require(manifest, "manifest");
        require(config, "config");
        require(out, "out");
        *out = nullptr;
        *out = new idprof_curve{idprof::profile::compute_curve(manifest->manifest, to_config(config))};
    });
}

IDPROF_API uint64_t idprof_curve_size(const idprof_curve* curve) { return curve ? curve->curve.points.size() : 0; }

IDPROF_API idprof_status idprof_curve_point_at(const idprof_curve* curve, uint64_t position, idprof_curve_point* out) {
    return guard([&] {
        require(curve, "curve");
        require(out, "out");
        if (position >= curve->curve.points.size()) {
            throw idprof::Error(idprof::ErrorCode::InvalidArgument, "curve position out of range");
        }
        const auto& p = curve->curve.points[position];
        out->index = p.index;
        out->relative_depth = p.relative_depth;
        out->has_value = p.estimate ? 1 : 0;
        out->value = p.estimate ? p.estimate->value : 0.0;
    });
}

IDPROF_API idprof_status idprof_curve_peak(const idprof_curve* curve, idprof_peak* out) {
    return guard([&] {
        require(curve, "curve");
        require(out, "out");
        fill_peak(idprof::profile::find_peak(curve->curve), out);
    });
}

IDPROF_API idprof_status idprof_curve_render(const idprof_curve* curve, idprof_format format, char** out) {
    return guard([&] {
        require(curve, "curve");
        require(out, "out");
        *out = nullptr;
        switch (format) {
            case IDPROF_FORMAT_JSON: {
                const auto peak = idprof::profile::find_peak(curve->curve);
                *out = copy_string(idprof::report::dump(idprof::report::profile_to_json(curve->curve, peak)));
                break;
            }
            case IDPROF_FORMAT_CSV: *out = copy_string(idprof::report::curve_to_csv(curve->curve)); break;
            case IDPROF_FORMAT_SVG: {
                const auto peak = idprof::profile::find_peak(curve->curve);
                *out = copy_string(idprof::report::curve_to_svg(curve->curve, peak));
                break;
            }
            default: throw idprof::Error(idprof::ErrorCode::InvalidArgument, "unknown format");
        }
    });
}

IDPROF_API void idprof_curve_free(idprof_curve* curve) { delete curve; }

IDPROF_API idprof_status idprof_find_peak(const double* values, uint64_t count, idprof_peak* out) {
    return guard([&] {
        require(out, "out");
        if (count != 0) require(values, "values");
        fill_peak(idprof::profile::find_peak(std::span<const double>(values, count)), out);
    });
}

IDPROF_API idprof_status idprof_records_load_dir(const char* dir, idprof_records** out) {
    return guard([&] {
        require(dir, "dir");
        require(out, "out");
        *out = nullptr;
        *out = new idprof_records{idprof::records::load_records_dir(dir)};
    });
}

IDPROF_API uint64_t idprof_records_count(const idprof_records* records) {
    return records ? records->records.size() : 0;
}

IDPROF_API idprof_status idprof_records_render_peaks(const idprof_records* records, idprof_format format, char** out) {
    return guard([&] {
        require(records, "records");
        require(out, "out");
        *out = nullptr;
        const auto table = idprof::analysis::aggregate_peaks(records->records);
        switch (format) {
            case IDPROF_FORMAT_JSON: *out = copy_string(idprof::report::dump(idprof::report::peak_table_to_json(table))); break;
            case IDPROF_FORMAT_CSV: *out = copy_string(idprof::report::peak_table_to_csv(table)); break;
            default: throw idprof::Error(idprof::ErrorCode::InvalidArgument, "peak tables render as JSON or CSV");
        }
    });
}

IDPROF_API void idprof_records_free(idprof_records* records) { delete records; }

IDPROF_API idprof_status idprof_correlate(const idprof_records* records, idprof_correlation** out) {
    return guard([&] {
        require(records, "records");
        require(out, "out");
        *out = nullptr;
        *out = new idprof_correlation{idprof::analysis::correlate_peak_vs_data(records->records)};
    });
}

IDPROF_API idprof_status idprof_correlation_summary_get(const idprof_correlation* corr, idprof_correlation_summary* out) {
    return guard([&] {
        require(corr, "corr");
        require(out, "out");
        const auto& r = corr->report;
        *out = idprof_correlation_summary{};
        out->n_points = r.points.size();
        out->r = r.r;
        out->slope = r.fit.slope;
        out->intercept = r.fit.intercept;
        if (r.pooled) {
            out->has_pooled = 1;
            out->pooled_n_points = r.pooled->n_points;
            out->pooled_r = r.pooled->r;
            out->pooled_slope = r.pooled->fit.slope;
            out->pooled_intercept = r.pooled->fit.intercept;
        }
    });
}

IDPROF_API idprof_status idprof_correlation_render(const idprof_correlation* corr, idprof_format format, char** out) {
    return guard([&] {
        require(corr, "corr");
        require(out, "out");
        *out = nullptr;
        switch (format) {
            case IDPROF_FORMAT_JSON: *out = copy_string(idprof::report::dump(idprof::report::correlation_to_json(corr->report))); break;
            case IDPROF_FORMAT_CSV: *out = copy_string(idprof::report::correlation_to_csv(corr->report)); break;
            case IDPROF_FORMAT_SVG: *out = copy_string(idprof::report::correlation_to_svg(corr->report)); break;
            default: throw idprof::Error(idprof::ErrorCode::InvalidArgument, "unknown format");
        }
    });
}

IDPROF_API void idprof_correlation_free(idprof_correlation* corr) { delete corr; }

IDPROF_API idprof_status idprof_sweep_load_root(const char* root, idprof_sweep** out) {
    return guard([&] {
        require(root, "root");
        require(out, "out");
        *out = nullptr;
        *out = new idprof_sweep{idprof::analysis::sweep_report(idprof::records::load_sweep_root(root))};
    });
}

IDPROF_API uint64_t idprof_sweep_row_count(const idprof_sweep* sweep) { return sweep ? sweep->rows.size() : 0; }

IDPROF_API idprof_status idprof_sweep_render(const idprof_sweep* sweep, idprof_format format, char** out) {
    return guard([&] {
        require(sweep, "sweep");
        require(out, "out");
        *out = nullptr;
        switch (format) {
            case IDPROF_FORMAT_JSON: *out = copy_string(idprof::report::dump(idprof::report::sweep_to_json(sweep->rows))); break;
            case IDPROF_FORMAT_CSV: *out = copy_string(idprof::report::sweep_to_csv(sweep->rows)); break;
            default: throw idprof::Error(idprof::ErrorCode::InvalidArgument, "sweep tables render as JSON or CSV");
        }
    });
}

IDPROF_API void idprof_sweep_free(idprof_sweep* sweep) { delete sweep; }

IDPROF_API idprof_status idprof_pearson_r(const double* xs, const double* ys, uint64_t count, double* out) {
    return guard([&] {
        require(out, "out");
        if (count != 0) {
            require(xs, "xs");
            require(ys, "ys");
        }
        *out = idprof::analysis::pearson_r(std::span<const double>(xs, count), std::span<const double>(ys, count));
    });
}

IDPROF_API idprof_status idprof_linear_fit(const double* xs, const double* ys, uint64_t count, double* slope,
                                           double* intercept) {
    return guard([&] {
        require(slope, "slope");
        require(intercept, "intercept");
        if (count != 0) {
            require(xs, "xs");
            require(ys, "ys");
        }
        const auto fit =
            idprof::analysis::linear_fit(std::span<const double>(xs, count), std::span<const double>(ys, count));
        *slope = fit.slope;
        *intercept = fit.intercept;
    });
}

IDPROF_API idprof_status idprof_synth_generate(const idprof_manifold_spec* spec, idprof_cloud** out) {
    return guard([&] {
        require(spec, "spec");
        require(out, "out");
        *out = nullptr;
        idprof::synth::ManifoldSpec s;
        switch (spec->kind) {
            case IDPROF_MANIFOLD_HYPERCUBE: s.kind = idprof::synth::ManifoldKind::Hypercube; break;
            case IDPROF_MANIFOLD_HYPERSPHERE: s.kind = idprof::synth::ManifoldKind::Hypersphere; break;
            case IDPROF_MANIFOLD_SWISS_ROLL: s.kind = idprof::synth::ManifoldKind::SwissRoll; break;
            default: throw idprof::Error(idprof::ErrorCode::SpecInvalid, "unknown manifold kind");
        }
        s.intrinsic_dim = spec->intrinsic_dim;
        s.ambient_dim = spec->ambient_dim;
        s.n_points = spec->n_points;
        s.noise_sigma = spec->noise_sigma;
        s.seed = spec->seed;
        *out = new idprof_cloud{idprof::synth::generate(s)};
    });
}

IDPROF_API idprof_status idprof_synth_run(const char* spec_json, const char* out_dir, char** out_summary) {
    return guard([&] {
        require(spec_json, "spec_json");
        require(out_dir, "out_dir");
        require(out_summary, "out_summary");
        *out_summary = nullptr;
        *out_summary = copy_string(idprof::synth::run_spec(spec_json, out_dir));
    });
}

}  // extern "C"
