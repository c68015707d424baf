#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>

#include <json.hpp>

#include "error.hpp"
#include "npy.hpp"
#include "rng.hpp"

namespace idprof::synth {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::SpecInvalid, what); }

Eigen::MatrixXd draw_basis(Rng& rng, std::size_t ambient, std::size_t source) {
    Eigen::MatrixXd gauss(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(source));
    for (Eigen::Index r = 0; r < gauss.rows(); ++r)
        for (Eigen::Index c = 0; c < gauss.cols(); ++c) gauss(r, c) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    return qr.householderQ() * Eigen::MatrixXd::Identity(gauss.rows(), gauss.cols());
}

// Maps n x s intrinsic coordinates into R^D (identity when s == D) and adds noise.
PointCloud embed(const std::vector<double>& coords, std::size_t n, std::size_t source,
                 const ManifoldSpec& spec, Rng& rng) {
    const std::size_t dim = spec.ambient_dim;
    std::vector<double> out(n * dim, 0.0);
    if (source == dim) {
        out = coords;
    } else {
        const Eigen::MatrixXd basis = draw_basis(rng, dim, source);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t r = 0; r < dim; ++r) {
                double acc = 0.0;
                for (std::size_t c = 0; c < source; ++c) {
                    acc += basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * coords[i * source + c];
                }
                out[i * dim + r] = acc;
            }
        }
    }
    if (spec.noise_sigma > 0.0) {
        for (double& v : out) v += spec.noise_sigma * rng.normal();
    }
    return PointCloud(n, dim, std::move(out));
}

std::string layer_name(std::size_t index, std::size_t count) {
    std::string num = std::to_string(index);
    const std::size_t width = count >= 100 ? 3 : 2;
    if (num.size() < width) num.insert(0, width - num.size(), '0');
    return "layer_" + num;
}

void require_kind(const ManifoldSpec& spec, ManifoldKind kind) {
    if (spec.kind != kind) invalid("generator called with a spec of kind " + std::string(kind_name(spec.kind)));
    spec.validate();
}

}  // namespace

std::string_view kind_name(ManifoldKind kind) noexcept {
    switch (kind) {
        case ManifoldKind::Hypercube: return "hypercube";
        case ManifoldKind::Hypersphere: return "hypersphere";
        case ManifoldKind::SwissRoll: return "swiss_roll";
    }
    return "unknown";
}

ManifoldKind parse_kind(std::string_view name) {
    if (name == "hypercube") return ManifoldKind::Hypercube;
    if (name == "hypersphere") return ManifoldKind::Hypersphere;
    if (name == "swiss_roll") return ManifoldKind::SwissRoll;
    invalid("unknown manifold kind '" + std::string(name) + "'");
}

void ManifoldSpec::validate() const {
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) invalid("noise_sigma must be finite and >= 0");
    std::size_t d = intrinsic_dim;
    if (kind == ManifoldKind::SwissRoll) {
        if (d != 0 && d != 2) invalid("swiss_roll has intrinsic dimension 2");
        d = 2;
        if (ambient_dim < 3) invalid("swiss_roll needs ambient_dim >= 3");
    }
    if (d < 1) invalid("intrinsic_dim must be >= 1");
    if (d > ambient_dim) invalid("intrinsic_dim exceeds ambient_dim");
    if (kind == ManifoldKind::Hypersphere && ambient_dim < d + 1) {
        invalid("hypersphere S^" + std::to_string(d) + " needs ambient_dim >= " + std::to_string(d + 1));
    }
    if (n_points < d + 2) invalid("n_points must be >= intrinsic_dim + 2");
}

Eigen::MatrixXd orthonormal_embedding(std::size_t ambient, std::size_t source, std::uint64_t seed) {
    if (source == 0 || source > ambient) invalid("embedding needs 1 <= source <= ambient");
    Rng rng(seed);
    return draw_basis(rng, ambient, source);
}

PointCloud hypercube(const ManifoldSpec& spec) {
    require_kind(spec, ManifoldKind::Hypercube);
    Rng rng(spec.seed);
    std::vector<double> coords(spec.n_points * spec.intrinsic_dim);
    for (double& v : coords) v = rng.uniform();
    return embed(coords, spec.n_points, spec.intrinsic_dim, spec, rng);
}

PointCloud hypersphere(const ManifoldSpec& spec) {
    require_kind(spec, ManifoldKind::Hypersphere);
    Rng rng(spec.seed);
    const std::size_t source = spec.intrinsic_dim + 1;
    std::vector<double> coords(spec.n_points * source);
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        double* p = coords.data() + i * source;
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (std::size_t c = 0; c < source; ++c) {
                p[c] = rng.normal();
                norm2 += p[c] * p[c];
            }
        } while (norm2 == 0.0);
        const double norm = std::sqrt(norm2);
        for (std::size_t c = 0; c < source; ++c) p[c] /= norm;
    }
    return embed(coords, spec.n_points, source, spec, rng);
}

PointCloud swiss_roll(const ManifoldSpec& spec) {
    require_kind(spec, ManifoldKind::SwissRoll);
    Rng rng(spec.seed);
    std::vector<double> coords(spec.n_points * 3);
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * rng.uniform());
        const double h = 21.0 * rng.uniform();
        coords[i * 3 + 0] = t * std::cos(t);
        coords[i * 3 + 1] = h;
        coords[i * 3 + 2] = t * std::sin(t);
    }
    return embed(coords, spec.n_points, 3, spec, rng);
}

PointCloud generate(const ManifoldSpec& spec) {
    switch (spec.kind) {
        case ManifoldKind::Hypercube: return hypercube(spec);
        case ManifoldKind::Hypersphere: return hypersphere(spec);
        case ManifoldKind::SwissRoll: return swiss_roll(spec);
    }
    invalid("unknown manifold kind");
}

std::filesystem::path write_layered_stack(const StackSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.id_sequence.empty()) invalid("id_sequence must not be empty");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string());

    // Validate every layer before writing anything.
    std::vector<ManifoldSpec> specs;
    for (std::size_t i = 0; i < spec.id_sequence.size(); ++i) {
        ManifoldSpec layer{ManifoldKind::Hypercube, spec.id_sequence[i], spec.ambient_dim, spec.n_points, 0.0,
                           spec.seed + i};
        layer.validate();
        specs.push_back(layer);
    }

    profile::LayerManifest manifest;
    manifest.model_id = spec.model_id;
    manifest.dataset_id = spec.dataset_id;
    manifest.layer_count = spec.id_sequence.size();
    manifest.metadata.train_size = spec.n_points;
    manifest.metadata.task = "synthetic";
    manifest.metadata.input_dims = spec.ambient_dim;
    manifest.metadata.class_count = 2;

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string name = layer_name(i + 1, specs.size());
        npy::save(out_dir / (name + ".npy"), hypercube(specs[i]), spec.dtype);
        manifest.layers.push_back({i + 1, name, name + ".npy"});
    }

    const auto manifest_path = out_dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + manifest_path.string());
    out << profile::manifest_to_json(manifest);
    return manifest_path;
}

namespace {

using nlohmann::json;

void check_keys(const json& doc, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : doc.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            invalid("unknown synth spec key '" + key + "'");
        }
    }
}

std::uint64_t count_field(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_number_unsigned()) invalid(std::string("synth spec needs non-negative integer '") + key + "'");
    return it->get<std::uint64_t>();
}

std::string text_field(const json& doc, const char* key, const std::string& fallback) {
    const auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    if (!it->is_string()) invalid(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

Precision dtype_field(const json& doc) {
    const std::string dtype = text_field(doc, "dtype", "f8");
    if (dtype == "f8") return Precision::Double;
    if (dtype == "f4") return Precision::Single;
    invalid("dtype must be 'f4' or 'f8'");
}

}  // namespace

std::string run_spec(const std::string& spec_json, const std::filesystem::path& out_dir) {
    json doc;
    try {
        doc = json::parse(spec_json);
    } catch (const json::parse_error& e) {
        invalid(std::string("synth spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) invalid("synth spec must be a JSON object");
    const std::string kind = text_field(doc, "kind", "");

    json summary = {{"kind", "idprof.synth"}, {"spec", kind}};
    if (kind == "layered_stack") {
        check_keys(doc, {"kind", "id_sequence", "n_points", "ambient_dim", "seed", "model_id", "dataset_id", "dtype"});
        StackSpec stack;
        const auto ids = doc.find("id_sequence");
        if (ids == doc.end() || !ids->is_array()) invalid("layered_stack needs an 'id_sequence' array");
        for (const auto& v : *ids) {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) invalid("id_sequence entries must be positive integers");
            stack.id_sequence.push_back(v.get<std::size_t>());
        }
        stack.n_points = count_field(doc, "n_points");
        stack.ambient_dim = count_field(doc, "ambient_dim");
        stack.seed = count_field(doc, "seed");
        stack.model_id = text_field(doc, "model_id", stack.model_id);
        stack.dataset_id = text_field(doc, "dataset_id", stack.dataset_id);
        stack.dtype = dtype_field(doc);
        const auto manifest = write_layered_stack(stack, out_dir);
        json files = json::array();
        for (std::size_t i = 0; i < stack.id_sequence.size(); ++i) {
            files.push_back(layer_name(i + 1, stack.id_sequence.size()) + ".npy");
        }
        files.push_back(manifest.filename().string());
        summary["files"] = files;
        summary["manifest"] = manifest.filename().string();
        return summary.dump(2) + "\n";
    }

    check_keys(doc, {"kind", "intrinsic_dim", "ambient_dim", "n_points", "noise_sigma", "seed", "name", "dtype"});
    ManifoldSpec spec;
    spec.kind = parse_kind(kind);
    spec.intrinsic_dim = doc.contains("intrinsic_dim") ? count_field(doc, "intrinsic_dim")
                                                       : (spec.kind == ManifoldKind::SwissRoll ? 2 : 0);
    spec.ambient_dim = count_field(doc, "ambient_dim");
    spec.n_points = count_field(doc, "n_points");
    spec.seed = count_field(doc, "seed");
    if (auto it = doc.find("noise_sigma"); it != doc.end()) {
        if (!it->is_number()) invalid("noise_sigma must be a number");
        spec.noise_sigma = it->get<double>();
    }
    const std::string name = text_field(doc, "name", std::string(kind_name(spec.kind)));
    if (name.empty() || name.find('/') != std::string::npos) invalid("name must be a plain file stem");
    const Precision dtype = dtype_field(doc);
    const PointCloud cloud = generate(spec);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string());
    npy::save(out_dir / (name + ".npy"), cloud, dtype);
    summary["files"] = json::array({name + ".npy"});
    summary["ground_truth_id"] = spec.kind == ManifoldKind::SwissRoll ? 2 : spec.intrinsic_dim;
    return summary.dump(2) + "\n";
}

}  // namespace idprof::synth
