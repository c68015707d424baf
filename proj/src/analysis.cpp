#include "analysis.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace idprof::analysis {

namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorCode::LengthMismatch, "xs has " + std::to_string(xs.size()) + " values, ys has " +
                                                   std::to_string(ys.size()));
    }
    if (xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 points");
}

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

struct Moments {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    double mx = 0.0;
    double my = 0.0;
};

Moments centered_moments(std::span<const double> xs, std::span<const double> ys) {
    Moments m;
    m.mx = mean_of(xs);
    m.my = mean_of(ys);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - m.mx;
        const double dy = ys[i] - m.my;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    return m;
}

DomainAggregate aggregate_domain(Domain domain, const std::vector<PeakAggregate>& rows) {
    std::vector<double> dmax;
    std::vector<double> depth;
    for (const auto& row : rows) {
        if (row.domain != domain) continue;
        dmax.push_back(row.d_max.mean);
        depth.push_back(row.rel_depth.mean);
    }
    return DomainAggregate{domain, dmax.size(), mean_std(dmax), mean_std(depth)};
}

}  // namespace

std::string_view domain_name(Domain d) noexcept { return d == Domain::Natural ? "natural" : "medical"; }

Domain parse_domain(std::string_view name) {
    if (name == "natural") return Domain::Natural;
    if (name == "medical") return Domain::Medical;
    throw Error(ErrorCode::Schema, "unknown domain '" + std::string(name) + "' (expected natural or medical)");
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "mean of an empty list");
    const double mean = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return MeanStd{mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

std::vector<profile::PeakSummary> model_points(const DatasetRecord& record) {
    if (record.peaks.empty()) throw Error(ErrorCode::EmptyRecord, "dataset '" + record.dataset_id + "' has no peaks");
    std::vector<profile::PeakSummary> points;
    if (record.domain == Domain::Medical) {
        for (const auto& p : record.peaks) points.push_back(p.peak);
        return points;
    }
    std::map<std::string, std::vector<const profile::PeakSummary*>> by_arch;
    for (const auto& p : record.peaks) by_arch[p.architecture].push_back(&p.peak);
    for (const auto& [arch, runs] : by_arch) {
        profile::PeakSummary avg;
        for (const auto* run : runs) {
            avg.d_max += run->d_max;
            avg.rel_depth += run->rel_depth;
        }
        avg.d_max /= static_cast<double>(runs.size());
        avg.rel_depth /= static_cast<double>(runs.size());
        // i_star has no meaning after averaging runs of differing depth.
        avg.i_star = 0;
        points.push_back(avg);
    }
    return points;
}

PeakAggregate aggregate_record(const DatasetRecord& record) {
    const auto points = model_points(record);
    std::vector<double> dmax;
    std::vector<double> depth;
    for (const auto& p : points) {
        dmax.push_back(p.d_max);
        depth.push_back(p.rel_depth);
    }
    return PeakAggregate{record.dataset_id, record.domain, points.size(), mean_std(dmax), mean_std(depth)};
}

PeakTable aggregate_peaks(std::span<const DatasetRecord> records) {
    if (records.empty()) throw Error(ErrorCode::EmptyInput, "no dataset records");
    PeakTable table;
    for (const auto& r : records) table.datasets.push_back(aggregate_record(r));
    for (Domain d : {Domain::Natural, Domain::Medical}) {
        const bool present = std::any_of(table.datasets.begin(), table.datasets.end(),
                                         [&](const PeakAggregate& a) { return a.domain == d; });
        if (present) table.domains.push_back(aggregate_domain(d, table.datasets));
    }
    return table;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
    check_pair(xs, ys);
    const Moments m = centered_moments(xs, ys);
    if (m.sxx == 0.0 || m.syy == 0.0) throw Error(ErrorCode::ZeroVariance, "correlation undefined for constant input");
    const double r = m.sxy / std::sqrt(m.sxx * m.syy);
    return std::clamp(r, -1.0, 1.0);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    check_pair(xs, ys);
    const Moments m = centered_moments(xs, ys);
    if (m.sxx == 0.0) throw Error(ErrorCode::ZeroVariance, "least squares undefined for constant xs");
    const double slope = m.sxy / m.sxx;
    return LinearFit{slope, m.my - slope * m.mx};
}

CorrelationReport correlate_peak_vs_data(std::span<const DatasetRecord> records) {
    if (records.size() < 3) {
        throw Error(ErrorCode::TooFewDatasets,
                    "correlation needs at least 3 datasets, got " + std::to_string(records.size()));
    }
    CorrelationReport report;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> pooled_x;
    std::vector<double> pooled_y;
    for (const auto& record : records) {
        if (!record.d_data) throw Error(ErrorCode::Schema, "dataset '" + record.dataset_id + "' has no d_data estimate");
        const auto agg = aggregate_record(record);
        CorrelationPoint point{record.dataset_id, record.domain, record.d_data->value,
                               record.d_data->spread.value_or(0.0), agg.d_max};
        xs.push_back(point.d_data);
        ys.push_back(point.d_max.mean);
        for (const auto& p : model_points(record)) {
            pooled_x.push_back(point.d_data);
            pooled_y.push_back(p.d_max);
        }
        report.points.push_back(std::move(point));
    }
    report.r = pearson_r(xs, ys);
    report.fit = linear_fit(xs, ys);
    try {
        report.pooled = PooledCorrelation{pooled_x.size(), pearson_r(pooled_x, pooled_y), linear_fit(pooled_x, pooled_y)};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroVariance) throw;
    }
    return report;
}

std::vector<SweepRow> sweep_report(const std::map<std::size_t, std::vector<DatasetRecord>>& groups) {
    if (groups.empty()) throw Error(ErrorCode::EmptyGroup, "no training-size groups");
    std::vector<SweepRow> rows;
    for (const auto& [train_size, records] : groups) {
        if (records.empty()) {
            throw Error(ErrorCode::EmptyGroup, "no dataset records for N=" + std::to_string(train_size));
        }
        const PeakTable table = aggregate_peaks(records);
        for (const auto& domain : table.domains) rows.push_back(SweepRow{train_size, domain});
    }
    return rows;
}

}  // namespace idprof::analysis
