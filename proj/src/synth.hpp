#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "point_cloud.hpp"
#include "profile.hpp"

namespace idprof::synth {

enum class ManifoldKind { Hypercube, Hypersphere, SwissRoll };

std::string_view kind_name(ManifoldKind kind) noexcept;
ManifoldKind parse_kind(std::string_view name);

/// Parameters of a point cloud with known intrinsic dimension.
///
/// Draw order from Rng(seed): intrinsic coordinates (row-major), then the
/// embedding's Gaussian matrix (row-major, skipped when no embedding is
/// needed), then the ambient noise (row-major, skipped when sigma == 0).
struct ManifoldSpec {
    ManifoldKind kind = ManifoldKind::Hypercube;
    std::size_t intrinsic_dim = 1;  ///< swiss_roll: 0 or 2
    std::size_t ambient_dim = 1;
    std::size_t n_points = 2;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    /// Throws SpecInvalid.
    void validate() const;
};

/// D x s matrix with orthonormal columns: thin Q of a Gaussian matrix.
Eigen::MatrixXd orthonormal_embedding(std::size_t ambient, std::size_t source, std::uint64_t seed);

PointCloud hypercube(const ManifoldSpec& spec);
PointCloud hypersphere(const ManifoldSpec& spec);
PointCloud swiss_roll(const ManifoldSpec& spec);
PointCloud generate(const ManifoldSpec& spec);

struct StackSpec {
    std::vector<std::size_t> id_sequence;
    std::size_t n_points = 0;
    std::size_t ambient_dim = 0;
    std::uint64_t seed = 0;
    std::string model_id = "synthetic";
    std::string dataset_id = "synthetic";
    Precision dtype = Precision::Double;
};

/// Writes one hypercube dump per entry of `id_sequence` (layer i uses seed + i - 1)
/// plus `manifest.json` into `out_dir`; returns the manifest path. Does not
/// enforce L >= 2; that is left to load_manifest.
std::filesystem::path write_layered_stack(const StackSpec& spec, const std::filesystem::path& out_dir);

/// Executes a synth spec document and returns a JSON summary of the files written.
///
/// Single cloud: {"kind": "hypercube" | "hypersphere" | "swiss_roll",
///   "intrinsic_dim", "ambient_dim", "n_points", "seed", ["noise_sigma"],
///   ["name"], ["dtype": "f4" | "f8"]} writes <name or kind>.npy.
/// Layer stack: {"kind": "layered_stack", "id_sequence": [...], "n_points",
///   "ambient_dim", "seed", ["model_id"], ["dataset_id"], ["dtype"]} writes the
///   dumps and manifest.json. Unknown keys are rejected with SpecInvalid.
std::string run_spec(const std::string& spec_json, const std::filesystem::path& out_dir);

}  // namespace idprof::synth
