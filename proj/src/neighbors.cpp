#include "neighbors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "error.hpp"
#include "rng.hpp"

namespace idprof::neighbors {

namespace {

// Tile sizes: a block of query rows is scored against a block of candidate
// rows one coordinate chunk at a time, so that the working set stays in cache
// even for very wide rows. Each pairwise sum still runs over coordinates
// 0..D-1 in order, so tiling never changes a distance bit.
constexpr std::size_t kQueryBlock = 16;
constexpr std::size_t kCandidateBlock = 128;
constexpr std::size_t kCoordChunk = 512;

struct DuplicateHit {
    std::size_t query;
    std::size_t other;
};

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename T>
std::optional<DuplicateHit> score_block(std::span<const T> data, std::size_t n, std::size_t dim,
                                        std::span<const std::size_t> queries, std::size_t k,
                                        std::vector<double>& sq, std::vector<std::pair<double, std::size_t>>& order,
                                        std::span<double> out_rows) {
    const std::size_t qn = queries.size();
    std::fill(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(qn * n), 0.0);

    for (std::size_t c0 = 0; c0 < n; c0 += kCandidateBlock) {
        const std::size_t c1 = std::min(n, c0 + kCandidateBlock);
        for (std::size_t j0 = 0; j0 < dim; j0 += kCoordChunk) {
            const std::size_t j1 = std::min(dim, j0 + kCoordChunk);
            for (std::size_t qi = 0; qi < qn; ++qi) {
                const T* q = data.data() + queries[qi] * dim;
                double* acc_row = sq.data() + qi * n;
                for (std::size_t c = c0; c < c1; ++c) {
                    const T* p = data.data() + c * dim;
                    double acc = acc_row[c];
                    for (std::size_t j = j0; j < j1; ++j) {
                        const double diff = static_cast<double>(q[j]) - static_cast<double>(p[j]);
                        acc += diff * diff;
                    }
                    acc_row[c] = acc;
                }
            }
        }
    }

    for (std::size_t qi = 0; qi < qn; ++qi) {
        const std::size_t self = queries[qi];
        const double* acc_row = sq.data() + qi * n;
        order.clear();
        for (std::size_t c = 0; c < n; ++c) {
            if (c == self) continue;
            if (acc_row[c] == 0.0) return DuplicateHit{self, c};
            order.emplace_back(acc_row[c], c);
        }
        auto kth = order.begin() + static_cast<std::ptrdiff_t>(k);
        std::nth_element(order.begin(), kth - 1, order.end());
        std::sort(order.begin(), kth);
        double* dst = out_rows.data() + qi * k;
        for (std::size_t r = 0; r < k; ++r) dst[r] = std::sqrt(order[r].first);
    }
    return std::nullopt;
}

}  // namespace

NeighborTable knn_for_queries(const PointCloud& points, std::span<const std::size_t> queries,
                              std::size_t k, const KnnOptions& options) {
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();
    if (k == 0) throw Error(ErrorCode::KTooLarge, "k must be positive");
    if (k > n - 1) {
        throw Error(ErrorCode::KTooLarge,
                    "k=" + std::to_string(k) + " exceeds N-1=" + std::to_string(n - 1));
    }
    for (std::size_t q : queries) {
        if (q >= n) throw Error(ErrorCode::InvalidArgument, "query index out of range");
    }

    NeighborTable table;
    table.k = k;
    table.query_index.assign(queries.begin(), queries.end());
    table.dists.assign(queries.size() * k, 0.0);

    const std::size_t blocks = (queries.size() + kQueryBlock - 1) / kQueryBlock;
    std::vector<std::optional<DuplicateHit>> hits(blocks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        std::vector<double> sq(kQueryBlock * n);
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(n);
        for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
            const std::size_t q0 = b * kQueryBlock;
            const std::size_t q1 = std::min(queries.size(), q0 + kQueryBlock);
            const auto block_queries = queries.subspan(q0, q1 - q0);
            const auto out_rows = std::span<double>(table.dists).subspan(q0 * k, (q1 - q0) * k);
            hits[b] = points.visit([&](auto data) {
                return score_block(data, n, dim, block_queries, k, sq, order, out_rows);
            });
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(options.threads), std::max<std::size_t>(blocks, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (const auto& hit : hits) {
        if (hit) {
            throw Error(ErrorCode::DuplicatePoints,
                        "points " + std::to_string(hit->query) + " and " + std::to_string(hit->other) +
                            " coincide (distance 0); the log-ratio estimator is undefined");
        }
    }
    return table;
}

NeighborTable knn_distances(const PointCloud& points, std::size_t k, const KnnOptions& options) {
    std::vector<std::size_t> all(points.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return knn_for_queries(points, all, k, options);
}

NeighborTable knn_distances_subsampled(const PointCloud& points, std::size_t k, std::size_t m,
                                       std::uint64_t seed, const KnnOptions& options) {
    if (m == 0 || m > points.rows()) {
        throw Error(ErrorCode::InvalidArgument, "subsample size must be in [1, N], got " + std::to_string(m));
    }
    Rng rng(seed);
    std::vector<std::size_t> picked = rng.sample_without_replacement(points.rows(), m);
    std::sort(picked.begin(), picked.end());
    return knn_for_queries(points, picked, k, options);
}

PointCloud jittered(const PointCloud& points, double epsilon, std::uint64_t seed) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::InvalidArgument, "jitter epsilon must be finite and >= 0");
    }
    Rng rng(seed);
    std::vector<double> data = points.to_double();
    for (double& v : data) v += rng.uniform(-epsilon, epsilon);
    return PointCloud(points.rows(), points.cols(), std::move(data));
}

}  // namespace idprof::neighbors
