#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "point_cloud.hpp"

namespace idprof::neighbors {

/// Sorted k-nearest-neighbour distances for a set of query rows.
/// Row r holds the k smallest Euclidean distances from point `query_index[r]`
/// to every other point of the cloud, ascending, self excluded.
struct NeighborTable {
    std::size_t k = 0;
    std::vector<std::size_t> query_index;
    std::vector<double> dists;  ///< rows() * k, row-major

    std::size_t rows() const noexcept { return query_index.size(); }
    std::span<const double> row(std::size_t r) const noexcept {
        return std::span<const double>(dists).subspan(r * k, k);
    }
};

struct KnnOptions {
    unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

/// Exact kNN over all points. Throws KTooLarge (k > N-1 or k == 0) and
/// DuplicatePoints (some pair at distance exactly zero).
NeighborTable knn_distances(const PointCloud& points, std::size_t k, const KnnOptions& options = {});

/// Exact kNN for `m` query rows sampled without replacement (Rng(seed)), searched
/// against all N points. Query rows are reported in ascending index order.
NeighborTable knn_distances_subsampled(const PointCloud& points, std::size_t k, std::size_t m,
                                       std::uint64_t seed, const KnnOptions& options = {});

/// kNN for an explicit list of query rows.
NeighborTable knn_for_queries(const PointCloud& points, std::span<const std::size_t> queries,
                              std::size_t k, const KnnOptions& options = {});

/// Adds seeded uniform noise in [-epsilon, epsilon] to every coordinate
/// (row-major draw order). Used to break exact duplicates on request.
PointCloud jittered(const PointCloud& points, double epsilon, std::uint64_t seed);

}  // namespace idprof::neighbors
