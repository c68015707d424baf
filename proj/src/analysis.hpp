#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idcore.hpp"
#include "profile.hpp"

namespace idprof::analysis {

enum class Domain { Natural, Medical };

std::string_view domain_name(Domain d) noexcept;
Domain parse_domain(std::string_view name);

/// One trained model's peak. Natural-image datasets carry several runs
/// (class pairings) per architecture.
struct ModelPeak {
    std::string architecture;
    std::string run;
    profile::PeakSummary peak;
};

struct DatasetRecord {
    std::string dataset_id;
    Domain domain = Domain::Natural;
    std::optional<idcore::IDEstimate> d_data;  ///< required by correlate_peak_vs_data
    std::vector<ModelPeak> peaks;
};

/// Mean and population standard deviation.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(std::span<const double> values);

struct PeakAggregate {
    std::string dataset_id;
    Domain domain = Domain::Natural;
    std::size_t n_models = 0;  ///< architectures (natural) or peaks (medical) entering the stats
    MeanStd d_max;
    MeanStd rel_depth;
};

/// Mean and std across the per-dataset means of one domain.
struct DomainAggregate {
    Domain domain = Domain::Natural;
    std::size_t n_datasets = 0;
    MeanStd d_max;
    MeanStd rel_depth;
};

struct PeakTable {
    std::vector<PeakAggregate> datasets;  ///< input order
    std::vector<DomainAggregate> domains;  ///< natural first, then medical; absent domains omitted
};

/// Per-model (d_max, rel_depth) points of one dataset after run averaging:
/// natural datasets average their runs within each architecture (architectures
/// in name order); medical datasets use every peak as-is.
std::vector<profile::PeakSummary> model_points(const DatasetRecord& record);

/// Throws EmptyRecord.
PeakAggregate aggregate_record(const DatasetRecord& record);

/// Throws EmptyRecord (any record without peaks) or EmptyInput (no records).
PeakTable aggregate_peaks(std::span<const DatasetRecord> records);

/// Sample Pearson correlation, clamped to [-1, 1]. Throws LengthMismatch,
/// InvalidArgument (fewer than 2 points), ZeroVariance.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Throws LengthMismatch,
/// InvalidArgument, ZeroVariance (constant xs).
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

struct CorrelationPoint {
    std::string dataset_id;
    Domain domain = Domain::Natural;
    double d_data = 0.0;
    double d_data_spread = 0.0;  ///< bootstrap spread of d_data, 0 when absent
    MeanStd d_max;               ///< over models
};

struct PooledCorrelation {
    std::size_t n_points = 0;
    double r = 0.0;
    LinearFit fit;
};

struct CorrelationReport {
    std::vector<CorrelationPoint> points;
    double r = 0.0;
    LinearFit fit;
    std::optional<PooledCorrelation> pooled;  ///< per-model points; omitted if degenerate
};

/// Correlates per-dataset mean d_max against d_data. Throws TooFewDatasets
/// (< 3 records), SchemaError (record without d_data), EmptyRecord.
CorrelationReport correlate_peak_vs_data(std::span<const DatasetRecord> records);

struct SweepRow {
    std::size_t train_size = 0;
    DomainAggregate aggregate;
};

/// One row per (train size, domain), ascending train size, natural before
/// medical. Throws EmptyGroup.
std::vector<SweepRow> sweep_report(const std::map<std::size_t, std::vector<DatasetRecord>>& groups);

}  // namespace idprof::analysis
