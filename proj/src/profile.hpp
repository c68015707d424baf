#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idcore.hpp"

namespace idprof::profile {

struct LayerEntry {
    std::size_t index = 0;  ///< 1-based
    std::string name;
    std::string dump;  ///< as written in the manifest; relative paths resolve against base_dir
};

struct ManifestMetadata {
    std::size_t train_size = 0;
    std::string task;
    std::size_t input_dims = 0;
    std::size_t class_count = 0;
    // Optional keys used when grouping profiles into dataset records.
    std::string architecture;
    std::string domain;
    std::string run;
};

struct LayerManifest {
    std::string model_id;
    std::string dataset_id;
    std::size_t layer_count = 0;  ///< L
    ManifestMetadata metadata;
    std::vector<LayerEntry> layers;
    std::filesystem::path base_dir;
    std::size_t rows = 0;  ///< shared row count of every dump (0 until cross-checked)

    std::filesystem::path dump_path(const LayerEntry& layer) const;
};

/// Parses and validates the manifest JSON text (schema only; dumps untouched).
/// Throws SchemaError.
LayerManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);

/// Reads, validates, and cross-checks the dump headers. Throws SchemaError,
/// MissingDump, RowCountMismatch, FormatError.
LayerManifest load_manifest(const std::filesystem::path& path);

std::string manifest_to_json(const LayerManifest& manifest);

struct CurvePoint {
    std::size_t index = 0;
    std::string name;
    double relative_depth = 0.0;  ///< index / L
    std::optional<idcore::IDEstimate> estimate;
    std::string error;  ///< set when the layer failed and is excluded from the peak
};

struct IDCurve {
    LayerManifest manifest;
    idcore::EstimatorConfig config;
    std::vector<CurvePoint> points;
};

/// Estimates the ID of every layer dump in manifest order. Layers whose data
/// break the estimator (DuplicatePoints, DegenerateRow) are kept as missing
/// points carrying the error text; any other failure is rethrown with the
/// layer index prepended.
IDCurve compute_curve(const LayerManifest& manifest, const idcore::EstimatorConfig& config);

struct PeakSummary {
    std::size_t i_star = 0;
    double d_max = 0.0;
    double rel_depth = 0.0;
};

/// Earliest argmax of `values`, with layer i = position + 1 and L = values.size().
/// Throws EmptyInput for an empty curve.
PeakSummary find_peak(std::span<const double> values);

/// Peak over the non-missing points of the curve. Throws EmptyInput if every
/// layer failed.
PeakSummary find_peak(const IDCurve& curve);

}  // namespace idprof::profile
