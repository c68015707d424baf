#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "neighbors.hpp"
#include "oracles.hpp"

using idprof::ErrorCode;
using idprof::PointCloud;
using namespace idprof::neighbors;

namespace {

PointCloud to_cloud(const oracle::Matrix& m) { return PointCloud(m.rows, m.cols, m.data); }

std::vector<std::vector<double>> rows_of(const NeighborTable& t) {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < t.rows(); ++r) out.emplace_back(t.row(r).begin(), t.row(r).end());
    return out;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const idprof::Error& e) {
        return e.code();
    }
    FAIL("expected an idprof::Error");
    return ErrorCode::InvalidArgument;
}

void check_monotone(const NeighborTable& t) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto row = t.row(r);
        for (std::size_t j = 0; j < row.size(); ++j) {
            CHECK(row[j] > 0.0);
            if (j) CHECK(row[j - 1] <= row[j]);
        }
    }
}

}  // namespace

TEST_SUITE("neighbors") {

TEST_CASE("three points on a line") {
    const PointCloud cloud(3, 1, std::vector<double>{0, 1, 3});
    const auto t = knn_distances(cloud, 2);
    CHECK(rows_of(t) == std::vector<std::vector<double>>{{1, 3}, {1, 2}, {2, 3}});
}

TEST_CASE("unit square corners have nearest distance 1") {
    const PointCloud cloud(4, 2, std::vector<double>{0, 0, 1, 0, 0, 1, 1, 1});
    const auto t = knn_distances(cloud, 1);
    for (std::size_t r = 0; r < 4; ++r) CHECK(t.row(r)[0] == 1.0);
}

TEST_CASE("duplicates and oversized k are rejected") {
    const PointCloud dup(3, 1, std::vector<double>{0, 0, 1});
    CHECK(code_of([&] { knn_distances(dup, 1); }) == ErrorCode::DuplicatePoints);
    const PointCloud ok(3, 1, std::vector<double>{0, 1, 3});
    CHECK(code_of([&] { knn_distances(ok, 3); }) == ErrorCode::KTooLarge);
    CHECK(code_of([&] { knn_distances(ok, 0); }) == ErrorCode::KTooLarge);
    CHECK(code_of([&] { knn_distances_subsampled(ok, 2, 4, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("jitter separates exact duplicates") {
    const PointCloud dup(4, 2, std::vector<double>{0, 0, 0, 0, 1, 1, 2, 0});
    const auto moved = jittered(dup, 1e-6, 3);
    const auto t = knn_distances(moved, 2);
    check_monotone(t);
    CHECK(t.row(0)[0] < 1e-5);
    // Same seed, same noise.
    CHECK(jittered(dup, 1e-6, 3).to_double() == moved.to_double());
}

TEST_CASE("blocked kernel equals the naive double loop exactly") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 40 + 71 * seed;  // crosses block boundaries
        const std::size_t d = 1 + 3 * seed;
        const auto m = oracle::gaussian(n, d, seed);
        const std::size_t k = std::min<std::size_t>(n - 1, 5 + seed);
        const auto expected = oracle::knn(m, k);
        const auto got = knn_distances(to_cloud(m), k, {3});
        CHECK(rows_of(got) == expected);
        check_monotone(got);
    }
}

TEST_CASE("wide rows span several coordinate chunks without changing bits") {
    const auto m = oracle::gaussian(30, 1300, 11);
    CHECK(rows_of(knn_distances(to_cloud(m), 4)) == oracle::knn(m, 4));
}

TEST_CASE("thread count never changes a bit") {
    const auto cloud = to_cloud(oracle::gaussian(300, 17, 5));
    const auto one = knn_distances(cloud, 10, {1});
    for (unsigned threads : {2u, 5u, 8u}) CHECK(knn_distances(cloud, 10, {threads}).dists == one.dists);
}

TEST_CASE("isometry and scaling") {
    const auto m = oracle::gaussian(200, 8, 21);
    const auto base = knn_distances(to_cloud(m), 7);
    const auto moved = knn_distances(to_cloud(oracle::rotate_translate(m, 99)), 7);
    oracle::Matrix scaled = m;
    for (double& v : scaled.data) v *= 3.7;
    const auto grown = knn_distances(to_cloud(scaled), 7);
    for (std::size_t i = 0; i < base.dists.size(); ++i) {
        CHECK(oracle::rel_diff(base.dists[i], moved.dists[i]) <= 1e-9);
        CHECK(oracle::rel_diff(base.dists[i] * 3.7, grown.dists[i]) <= 1e-12);
    }
}

TEST_CASE("single-precision storage accumulates in double") {
    std::vector<float> f{0.f, 0.f, 3.f, 4.f, 6.f, 8.f};
    const PointCloud cloud(3, 2, f);
    CHECK(cloud.precision() == idprof::Precision::Single);
    const auto t = knn_distances(cloud, 2);
    CHECK(rows_of(t) == std::vector<std::vector<double>>{{5, 10}, {5, 5}, {5, 10}});
}

TEST_CASE("subsampled queries") {
    const auto cloud = to_cloud(oracle::gaussian(1000, 6, 8));
    SUBCASE("m = N reproduces the full table") {
        const auto full = knn_distances(to_cloud(oracle::gaussian(120, 4, 2)), 5);
        const auto sub = knn_distances_subsampled(to_cloud(oracle::gaussian(120, 4, 2)), 5, 120, 77);
        CHECK(sub.dists == full.dists);
        CHECK(sub.query_index == full.query_index);
    }
    SUBCASE("same seed gives identical tables") {
        const auto a = knn_distances_subsampled(cloud, 10, 200, 42);
        const auto b = knn_distances_subsampled(cloud, 10, 200, 42);
        CHECK(a.query_index == b.query_index);
        CHECK(a.dists == b.dists);
        CHECK(a.rows() == 200);
        CHECK(std::is_sorted(a.query_index.begin(), a.query_index.end()));
    }
    SUBCASE("different seeds pick different rows") {
        const auto a = knn_distances_subsampled(cloud, 10, 200, 42);
        const auto b = knn_distances_subsampled(cloud, 10, 200, 43);
        CHECK(a.query_index != b.query_index);
    }
    SUBCASE("subsampled rows search the whole cloud") {
        const auto full = knn_distances(cloud, 10);
        const auto sub = knn_distances_subsampled(cloud, 10, 50, 9);
        for (std::size_t r = 0; r < sub.rows(); ++r) {
            const auto q = sub.query_index[r];
            for (std::size_t j = 0; j < 10; ++j) CHECK(sub.row(r)[j] == full.row(q)[j]);
        }
    }
}

}  // TEST_SUITE
