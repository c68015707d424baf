#include "profile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "npy.hpp"

namespace idprof::profile {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) {
    throw Error(ErrorCode::Schema, "manifest: " + what);
}

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(std::string("missing key '") + key + "'");
    return *it;
}

std::string require_string(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_string()) schema_error(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::size_t require_count(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number_unsigned()) schema_error(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string optional_string(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) return {};
    if (!it->is_string()) schema_error(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::filesystem::path LayerManifest::dump_path(const LayerEntry& layer) const {
    const std::filesystem::path p(layer.dump);
    return p.is_absolute() ? p : base_dir / p;
}

LayerManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        schema_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_error("top level must be an object");

    LayerManifest m;
    m.base_dir = base_dir;
    m.model_id = require_string(doc, "model_id");
    m.dataset_id = require_string(doc, "dataset_id");
    m.layer_count = require_count(doc, "L");
    if (m.layer_count < 2) schema_error("L must be >= 2, got " + std::to_string(m.layer_count));

    const json& meta = require(doc, "metadata");
    if (!meta.is_object()) schema_error("'metadata' must be an object");
    m.metadata.train_size = require_count(meta, "train_size");
    m.metadata.task = require_string(meta, "task");
    m.metadata.input_dims = require_count(meta, "input_dims");
    m.metadata.class_count = require_count(meta, "class_count");
    m.metadata.architecture = optional_string(meta, "architecture");
    m.metadata.domain = optional_string(meta, "domain");
    m.metadata.run = optional_string(meta, "run");

    const json& layers = require(doc, "layers");
    if (!layers.is_array()) schema_error("'layers' must be an array");
    if (layers.size() != m.layer_count) {
        schema_error("L=" + std::to_string(m.layer_count) + " but " + std::to_string(layers.size()) +
                     " layers listed");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const json& entry = layers[i];
        if (!entry.is_object()) schema_error("layer entries must be objects");
        LayerEntry layer;
        layer.index = require_count(entry, "index");
        layer.name = require_string(entry, "name");
        layer.dump = require_string(entry, "dump");
        if (layer.index != i + 1) {
            schema_error("layer indices must run 1..L in order; position " + std::to_string(i + 1) +
                         " has index " + std::to_string(layer.index));
        }
        m.layers.push_back(std::move(layer));
    }
    return m;
}

LayerManifest load_manifest(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, "manifest not found: " + path.string());
    LayerManifest m = parse_manifest(read_text(path), path.parent_path());

    for (const LayerEntry& layer : m.layers) {
        const auto dump = m.dump_path(layer);
        if (!std::filesystem::is_regular_file(dump)) {
            throw Error(ErrorCode::MissingDump,
                        "layer " + std::to_string(layer.index) + ": dump not found: " + dump.string());
        }
        const npy::Header h = npy::read_header(dump);
        if (layer.index == 1) {
            m.rows = h.rows;
        } else if (h.rows != m.rows) {
            throw Error(ErrorCode::RowCountMismatch,
                        "layer " + std::to_string(layer.index) + " has " + std::to_string(h.rows) +
                            " rows, layer 1 has " + std::to_string(m.rows));
        }
    }
    return m;
}

std::string manifest_to_json(const LayerManifest& m) {
    json meta = {{"train_size", m.metadata.train_size},
                 {"task", m.metadata.task},
                 {"input_dims", m.metadata.input_dims},
                 {"class_count", m.metadata.class_count}};
    if (!m.metadata.architecture.empty()) meta["architecture"] = m.metadata.architecture;
    if (!m.metadata.domain.empty()) meta["domain"] = m.metadata.domain;
    if (!m.metadata.run.empty()) meta["run"] = m.metadata.run;

    json layers = json::array();
    for (const LayerEntry& layer : m.layers) {
        layers.push_back({{"index", layer.index}, {"name", layer.name}, {"dump", layer.dump}});
    }
    json doc = {{"model_id", m.model_id},
                {"dataset_id", m.dataset_id},
                {"L", m.layer_count},
                {"metadata", std::move(meta)},
                {"layers", std::move(layers)}};
    return doc.dump(2) + "\n";
}

IDCurve compute_curve(const LayerManifest& manifest, const idcore::EstimatorConfig& config) {
    config.validate();
    IDCurve curve;
    curve.manifest = manifest;
    curve.config = config;

    // Layers run one at a time so only a single dump is resident; the kNN
    // kernel parallelises within each layer.
    for (const LayerEntry& layer : manifest.layers) {
        CurvePoint point;
        point.index = layer.index;
        point.name = layer.name;
        point.relative_depth = static_cast<double>(layer.index) / static_cast<double>(manifest.layer_count);
        try {
            const PointCloud cloud = npy::load(manifest.dump_path(layer));
            point.estimate = idcore::estimate_id(cloud, config);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DuplicatePoints && e.code() != ErrorCode::DegenerateRow) {
                throw Error(e.code(), "layer " + std::to_string(layer.index) + " (" + layer.name + "): " + e.what());
            }
            point.error = std::string(error_name(e.code())) + ": " + e.what();
        }
        curve.points.push_back(std::move(point));
    }
    return curve;
}

PeakSummary find_peak(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "cannot take the peak of an empty curve");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return PeakSummary{best + 1, values[best],
                       static_cast<double>(best + 1) / static_cast<double>(values.size())};
}

PeakSummary find_peak(const IDCurve& curve) {
    std::optional<PeakSummary> peak;
    for (const CurvePoint& p : curve.points) {
        if (!p.estimate) continue;
        if (!peak || p.estimate->value > peak->d_max) {
            peak = PeakSummary{p.index, p.estimate->value, p.relative_depth};
        }
    }
    if (!peak) throw Error(ErrorCode::EmptyInput, "every layer of the curve failed; no peak");
    return *peak;
}

}  // namespace idprof::profile
