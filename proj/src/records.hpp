#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "analysis.hpp"

namespace idprof::records {

/// Collects dataset records from the `*.json` files directly inside `dir`.
///
/// Recognised documents (by their "kind" field; anything else is ignored):
///   idprof.profile  - a profile output; contributes its peak. Architecture is
///                     metadata.architecture (else model_id), run is
///                     metadata.run (else metadata.task).
///   idprof.peak     - a bare peak {dataset_id, architecture, run, d_max,
///                     rel_depth[, i_star, domain]}.
///   idprof.estimate - with dataset_id and domain set: the dataset's d_data.
///
/// Records come back ordered natural-then-medical, then by dataset_id.
/// Throws SchemaError for malformed or conflicting documents.
std::vector<analysis::DatasetRecord> load_records_dir(const std::filesystem::path& dir);

/// Accepts "500", "N500", "n500", "N=500".
std::optional<std::size_t> parse_train_size(std::string_view dir_name);

/// One records directory per training-set size under `root`. Throws EmptyGroup
/// when no size directory exists or one of them holds no records.
std::map<std::size_t, std::vector<analysis::DatasetRecord>> load_sweep_root(const std::filesystem::path& root);

}  // namespace idprof::records
