#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "neighbors.hpp"
#include "point_cloud.hpp"

namespace idprof::idcore {

/// How per-point MLE values are pooled into one global estimate.
enum class Aggregation {
    MacKay,  ///< inverse of the mean of inverses (pooled log-ratio average)
    Levina,  ///< arithmetic mean of the local estimates
};

std::string_view aggregation_name(Aggregation a) noexcept;
Aggregation parse_aggregation(std::string_view name);

struct Subsample {
    std::size_t m = 0;
    std::uint64_t seed = 0;
};

struct Bootstrap {
    std::size_t rounds = 0;
    std::uint64_t seed = 0;
};

struct Jitter {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

struct EstimatorConfig {
    std::size_t k = 20;
    Aggregation aggregation = Aggregation::MacKay;
    std::optional<Subsample> subsample;
    std::optional<Bootstrap> bootstrap;
    std::optional<Jitter> jitter;
    unsigned threads = 0;  ///< worker cap; never changes results

    /// Throws InvalidArgument unless k >= 2 and bootstrap rounds >= 1.
    void validate() const;
};

struct IDEstimate {
    double value = 0.0;
    std::size_t n_used = 0;
    EstimatorConfig config;
    std::optional<double> spread;  ///< population std over bootstrap rounds
};

/// Local maximum-likelihood ID from the first k sorted neighbour distances:
/// [ (1/(k-1)) * sum_{j<k} ln(T_k / T_j) ]^-1.
/// Throws DegenerateRow when T_k == T_1 and InvalidArgument on malformed rows.
double local_mle(std::span<const double> row, std::size_t k);

/// Throws EmptyInput for an empty list.
double aggregate(std::span<const double> locals, Aggregation mode);

std::vector<double> local_estimates(const neighbors::NeighborTable& table, std::size_t k);

IDEstimate estimate_id(const PointCloud& points, const EstimatorConfig& config);

}  // namespace idprof::idcore
