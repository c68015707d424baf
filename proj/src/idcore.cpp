#include "idcore.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace idprof::idcore {

std::string_view aggregation_name(Aggregation a) noexcept {
    return a == Aggregation::MacKay ? "mackay" : "levina";
}

Aggregation parse_aggregation(std::string_view name) {
    if (name == "mackay") return Aggregation::MacKay;
    if (name == "levina") return Aggregation::Levina;
    throw Error(ErrorCode::InvalidArgument,
                "unknown aggregation '" + std::string(name) + "' (expected mackay or levina)");
}

void EstimatorConfig::validate() const {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2, got " + std::to_string(k));
    if (bootstrap && bootstrap->rounds < 1) {
        throw Error(ErrorCode::InvalidArgument, "bootstrap rounds must be >= 1");
    }
    if (subsample && subsample->m < 1) {
        throw Error(ErrorCode::InvalidArgument, "subsample size must be >= 1");
    }
}

double local_mle(std::span<const double> row, std::size_t k) {
    if (k < 2 || row.size() < k) {
        throw Error(ErrorCode::InvalidArgument, "local_mle needs 2 <= k <= row length");
    }
    const double tk = row[k - 1];
    if (tk == row[0]) {
        throw Error(ErrorCode::DegenerateRow,
                    "all " + std::to_string(k) + " neighbours are equidistant; local estimate is infinite");
    }
    double log_sum = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        if (!(row[j] > 0.0) || row[j] > tk) {
            throw Error(ErrorCode::InvalidArgument, "neighbour row must be positive and ascending");
        }
        log_sum += std::log(tk / row[j]);
    }
    return static_cast<double>(k - 1) / log_sum;
}

double aggregate(std::span<const double> locals, Aggregation mode) {
    if (locals.empty()) throw Error(ErrorCode::EmptyInput, "no local estimates to aggregate");
    double sum = 0.0;
    if (mode == Aggregation::MacKay) {
        for (double v : locals) sum += 1.0 / v;
        return static_cast<double>(locals.size()) / sum;
    }
    for (double v : locals) sum += v;
    return sum / static_cast<double>(locals.size());
}

std::vector<double> local_estimates(const neighbors::NeighborTable& table, std::size_t k) {
    std::vector<double> locals;
    locals.reserve(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
        try {
            locals.push_back(local_mle(table.row(r), k));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateRow) throw;
            throw Error(ErrorCode::DegenerateRow,
                        "point " + std::to_string(table.query_index[r]) + ": " + e.what());
        }
    }
    return locals;
}

IDEstimate estimate_id(const PointCloud& points, const EstimatorConfig& config) {
    config.validate();

    const neighbors::KnnOptions knn{config.threads};
    auto run = [&](const PointCloud& cloud) {
        if (config.subsample) {
            return neighbors::knn_distances_subsampled(cloud, config.k, config.subsample->m,
                                                       config.subsample->seed, knn);
        }
        return neighbors::knn_distances(cloud, config.k, knn);
    };
    const neighbors::NeighborTable table =
        config.jitter ? run(neighbors::jittered(points, config.jitter->epsilon, config.jitter->seed))
                      : run(points);

    const std::vector<double> locals = local_estimates(table, config.k);

    IDEstimate est;
    est.value = aggregate(locals, config.aggregation);
    est.n_used = locals.size();
    est.config = config;

    if (config.bootstrap) {
        // Round r draws from its own stream seeded with seed + r.
        const std::size_t rounds = config.bootstrap->rounds;
        std::vector<double> values(rounds);
        std::vector<double> resample(locals.size());
        for (std::size_t r = 0; r < rounds; ++r) {
            Rng rng(config.bootstrap->seed + r);
            for (double& v : resample) v = locals[rng.below(locals.size())];
            values[r] = aggregate(resample, config.aggregation);
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(rounds);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        est.spread = std::sqrt(ss / static_cast<double>(rounds));
    }
    return est;
}

}  // namespace idprof::idcore
