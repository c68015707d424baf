#include "records.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "report.hpp"

namespace idprof::records {

using nlohmann::json;

namespace {

struct Pending {
    std::optional<analysis::Domain> domain;
    analysis::DatasetRecord record;
};

std::string str_field(const json& j, const char* key, const std::filesystem::path& file) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw Error(ErrorCode::Schema, file.string() + ": missing string '" + key + "'");
    }
    return it->get<std::string>();
}

std::string opt_str(const json& j, const char* key) {
    const auto it = j.find(key);
    return it != j.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

double num_field(const json& j, const char* key, const std::filesystem::path& file) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number()) {
        throw Error(ErrorCode::Schema, file.string() + ": missing number '" + key + "'");
    }
    return it->get<double>();
}

profile::PeakSummary read_peak(const json& j, const std::filesystem::path& file) {
    profile::PeakSummary p;
    p.d_max = num_field(j, "d_max", file);
    p.rel_depth = num_field(j, "rel_depth", file);
    if (auto it = j.find("i_star"); it != j.end() && it->is_number_unsigned()) p.i_star = it->get<std::size_t>();
    if (!(p.rel_depth > 0.0 && p.rel_depth <= 1.0)) {
        throw Error(ErrorCode::Schema, file.string() + ": rel_depth must lie in (0, 1]");
    }
    return p;
}

void set_domain(Pending& pending, const std::string& name, const std::filesystem::path& file) {
    if (name.empty()) return;
    analysis::Domain d;
    try {
        d = analysis::parse_domain(name);
    } catch (const Error& e) {
        throw Error(ErrorCode::Schema, file.string() + ": " + e.what());
    }
    if (pending.domain && *pending.domain != d) {
        throw Error(ErrorCode::Schema, file.string() + ": conflicting domain for dataset '" +
                                           pending.record.dataset_id + "'");
    }
    pending.domain = d;
}

}  // namespace

std::vector<analysis::DatasetRecord> load_records_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::map<std::string, Pending> by_dataset;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        json doc;
        try {
            doc = json::parse(ss.str());
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::Schema, file.string() + ": invalid JSON: " + e.what());
        }
        if (!doc.is_object()) continue;
        const std::string kind = opt_str(doc, "kind");

        if (kind == "idprof.profile") {
            const std::string dataset = str_field(doc, "dataset_id", file);
            Pending& pending = by_dataset[dataset];
            pending.record.dataset_id = dataset;
            const json meta = doc.value("metadata", json::object());
            std::string arch = opt_str(meta, "architecture");
            if (arch.empty()) arch = str_field(doc, "model_id", file);
            std::string run = opt_str(meta, "run");
            if (run.empty()) run = opt_str(meta, "task");
            set_domain(pending, opt_str(meta, "domain"), file);
            const auto peak = doc.find("peak");
            if (peak == doc.end() || !peak->is_object()) throw Error(ErrorCode::Schema, file.string() + ": missing peak");
            pending.record.peaks.push_back({arch, run, read_peak(*peak, file)});
        } else if (kind == "idprof.peak") {
            const std::string dataset = str_field(doc, "dataset_id", file);
            Pending& pending = by_dataset[dataset];
            pending.record.dataset_id = dataset;
            set_domain(pending, opt_str(doc, "domain"), file);
            pending.record.peaks.push_back({str_field(doc, "architecture", file), opt_str(doc, "run"), read_peak(doc, file)});
        } else if (kind == "idprof.estimate") {
            const std::string dataset = opt_str(doc, "dataset_id");
            const std::string domain = opt_str(doc, "domain");
            if (dataset.empty() || domain.empty()) continue;
            Pending& pending = by_dataset[dataset];
            pending.record.dataset_id = dataset;
            set_domain(pending, domain, file);
            if (pending.record.d_data) {
                throw Error(ErrorCode::Schema, file.string() + ": second d_data estimate for '" + dataset + "'");
            }
            try {
                pending.record.d_data = report::estimate_from_json(doc);
            } catch (const Error& e) {
                throw Error(ErrorCode::Schema, file.string() + ": " + e.what());
            }
        }
    }

    std::vector<analysis::DatasetRecord> out;
    for (auto& [dataset, pending] : by_dataset) {
        if (!pending.domain) {
            throw Error(ErrorCode::Schema, "dataset '" + dataset + "' has no domain (set metadata.domain or a d_data estimate)");
        }
        pending.record.domain = *pending.domain;
        out.push_back(std::move(pending.record));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return static_cast<int>(a.domain) < static_cast<int>(b.domain);
    });
    return out;
}

std::optional<std::size_t> parse_train_size(std::string_view name) {
    if (name.starts_with("N=") || name.starts_with("n=")) {
        name.remove_prefix(2);
    } else if (name.starts_with('N') || name.starts_with('n')) {
        name.remove_prefix(1);
    }
    if (name.empty()) return std::nullopt;
    std::size_t value = 0;
    const auto res = std::from_chars(name.data(), name.data() + name.size(), value);
    if (res.ec != std::errc{} || res.ptr != name.data() + name.size()) return std::nullopt;
    return value;
}

std::map<std::size_t, std::vector<analysis::DatasetRecord>> load_sweep_root(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) throw Error(ErrorCode::Io, "not a directory: " + root.string());
    std::map<std::size_t, std::vector<analysis::DatasetRecord>> groups;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const auto size = parse_train_size(entry.path().filename().string());
        if (!size) continue;
        if (groups.count(*size)) {
            throw Error(ErrorCode::Schema, "two directories for N=" + std::to_string(*size) + " under " + root.string());
        }
        auto records = load_records_dir(entry.path());
        if (records.empty()) {
            throw Error(ErrorCode::EmptyGroup, "no records for N=" + std::to_string(*size) + " in " + entry.path().string());
        }
        groups.emplace(*size, std::move(records));
    }
    if (groups.empty()) throw Error(ErrorCode::EmptyGroup, "no training-size directories under " + root.string());
    return groups;
}

}  // namespace idprof::records
