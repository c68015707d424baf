#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "error.hpp"
#include "idcore.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using idprof::ErrorCode;
using idprof::PointCloud;
using namespace idprof::idcore;

namespace {

// Frozen from an independent scripted evaluation of the formula.
constexpr double kInvLn3 = 0.9102392266268373;
constexpr double kInvLn2 = 1.4426950408889634;
constexpr double kInvLn15 = 2.4663034623764317;
constexpr double kThreePointMacKay = 1.3653588399402563;
constexpr double kThreePointLevina = 1.6064125766307444;

PointCloud to_cloud(const oracle::Matrix& m) { return PointCloud(m.rows, m.cols, m.data); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const idprof::Error& e) {
        return e.code();
    }
    FAIL("expected an idprof::Error");
    return ErrorCode::InvalidArgument;
}

EstimatorConfig with_k(std::size_t k, Aggregation agg = Aggregation::MacKay) {
    EstimatorConfig c;
    c.k = k;
    c.aggregation = agg;
    return c;
}

}  // namespace

TEST_SUITE("idcore") {

TEST_CASE("local_mle on hand-checked rows") {
    const std::vector<double> a{1, 3}, b{1, 2}, flat{2, 2};
    CHECK(local_mle(a, 2) == doctest::Approx(kInvLn3).epsilon(1e-15));
    CHECK(local_mle(b, 2) == doctest::Approx(kInvLn2).epsilon(1e-15));
    CHECK(code_of([&] { local_mle(flat, 2); }) == ErrorCode::DegenerateRow);
    // Only the first k entries count.
    const std::vector<double> longer{1, 2, 100};
    CHECK(local_mle(longer, 2) == doctest::Approx(kInvLn2).epsilon(1e-15));
}

TEST_CASE("local_mle rejects malformed rows") {
    const std::vector<double> short_row{1}, unsorted{3, 1}, zero{0, 1};
    CHECK(code_of([&] { local_mle(short_row, 2); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { local_mle(unsorted, 2); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { local_mle(zero, 2); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { local_mle(short_row, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("aggregate modes") {
    const std::vector<double> locals{kInvLn3, kInvLn2, kInvLn15};
    CHECK(aggregate(locals, Aggregation::MacKay) == doctest::Approx(kThreePointMacKay).epsilon(1e-14));
    CHECK(aggregate(locals, Aggregation::Levina) == doctest::Approx(kThreePointLevina).epsilon(1e-14));
    const std::vector<double> fives{5, 5, 5};
    CHECK(aggregate(fives, Aggregation::MacKay) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(aggregate(fives, Aggregation::Levina) == 5.0);
    CHECK(code_of([] { aggregate({}, Aggregation::MacKay); }) == ErrorCode::EmptyInput);
}

TEST_CASE("mackay never exceeds levina") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> dist(0.5, 40.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> locals(2 + trial % 30);
        for (double& v : locals) v = dist(gen);
        CHECK(aggregate(locals, Aggregation::MacKay) < aggregate(locals, Aggregation::Levina));
    }
}

TEST_CASE("three-point cloud end to end") {
    const PointCloud cloud(3, 1, std::vector<double>{0, 1, 3});
    const auto est = estimate_id(cloud, with_k(2));
    CHECK(est.value == doctest::Approx(kThreePointMacKay).epsilon(1e-12));
    CHECK(est.n_used == 3);
    CHECK_FALSE(est.spread.has_value());
    CHECK(estimate_id(cloud, with_k(2, Aggregation::Levina)).value ==
          doctest::Approx(kThreePointLevina).epsilon(1e-12));
}

TEST_CASE("config validation and error propagation") {
    const PointCloud cloud(3, 1, std::vector<double>{0, 1, 3});
    CHECK(code_of([&] { estimate_id(cloud, with_k(1)); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { estimate_id(cloud, with_k(3)); }) == ErrorCode::KTooLarge);
    EstimatorConfig boot = with_k(2);
    boot.bootstrap = Bootstrap{0, 1};
    CHECK(code_of([&] { estimate_id(cloud, boot); }) == ErrorCode::InvalidArgument);
    const PointCloud dup(3, 1, std::vector<double>{0, 0, 1});
    CHECK(code_of([&] { estimate_id(dup, with_k(2)); }) == ErrorCode::DuplicatePoints);
    // Equidistant neighbours: middle point of {-1, 0, 1}.
    const PointCloud sym(3, 1, std::vector<double>{-1, 0, 1});
    CHECK(code_of([&] { estimate_id(sym, with_k(2)); }) == ErrorCode::DegenerateRow);
    CHECK(parse_aggregation("levina") == Aggregation::Levina);
    CHECK(code_of([] { parse_aggregation("median"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("jitter makes duplicate-heavy data estimable") {
    const PointCloud dup(4, 1, std::vector<double>{0, 0, 1, 3});
    EstimatorConfig c = with_k(2);
    c.jitter = Jitter{1e-3, 5};
    const auto a = estimate_id(dup, c);
    CHECK(a.value > 0.0);
    CHECK(estimate_id(dup, c).value == a.value);
}

TEST_CASE("matches the naive oracle for small clouds") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = oracle::gaussian(60 + 35 * seed, 3 + seed, 100 + seed);
        const auto cloud = to_cloud(m);
        CHECK(oracle::rel_diff(estimate_id(cloud, with_k(10)).value, oracle::mle_mackay(m, 10)) <= 1e-10);
        CHECK(oracle::rel_diff(estimate_id(cloud, with_k(10, Aggregation::Levina)).value, oracle::mle_levina(m, 10)) <=
              1e-10);
    }
}

TEST_CASE("scale, isometry and permutation invariance") {
    const auto m = oracle::gaussian(500, 50, 12);
    const double base = estimate_id(to_cloud(m), with_k(20)).value;

    oracle::Matrix scaled = m;
    for (double& v : scaled.data) v *= 7.3;
    CHECK(oracle::rel_diff(base, estimate_id(to_cloud(scaled), with_k(20)).value) <= 1e-12);

    CHECK(oracle::rel_diff(base, estimate_id(to_cloud(oracle::rotate_translate(m, 3)), with_k(20)).value) <= 1e-9);

    std::vector<std::size_t> perm(m.rows);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(6));
    oracle::Matrix shuffled = m;
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) shuffled.data[r * m.cols + c] = m.at(perm[r], c);
    CHECK(oracle::rel_diff(base, estimate_id(to_cloud(shuffled), with_k(20)).value) <= 1e-12);
}

TEST_CASE("bootstrap spread is seeded and non-negative") {
    const auto cloud = to_cloud(oracle::gaussian(300, 5, 1));
    EstimatorConfig c = with_k(10);
    c.bootstrap = Bootstrap{25, 9};
    const auto a = estimate_id(cloud, c);
    const auto b = estimate_id(cloud, c);
    REQUIRE(a.spread.has_value());
    CHECK(*a.spread > 0.0);
    CHECK(*a.spread == *b.spread);
    CHECK(a.value == estimate_id(cloud, with_k(10)).value);
    c.bootstrap->seed = 10;
    CHECK(*estimate_id(cloud, c).spread != *a.spread);
    c.bootstrap->rounds = 1;
    CHECK(*estimate_id(cloud, c).spread == 0.0);
}

TEST_CASE("subsampled estimate is reproducible") {
    const auto cloud = to_cloud(oracle::gaussian(400, 4, 2));
    EstimatorConfig c = with_k(10);
    c.subsample = Subsample{100, 5};
    const auto a = estimate_id(cloud, c);
    CHECK(a.n_used == 100);
    CHECK(estimate_id(cloud, c).value == a.value);
}

TEST_CASE("threads do not change the estimate") {
    const auto cloud = to_cloud(oracle::gaussian(400, 10, 3));
    EstimatorConfig c = with_k(20);
    c.threads = 1;
    const double one = estimate_id(cloud, c).value;
    c.threads = 8;
    CHECK(estimate_id(cloud, c).value == one);
}

TEST_CASE("recovers a 5-d hypercube in R^100") {
    idprof::synth::ManifoldSpec spec{idprof::synth::ManifoldKind::Hypercube, 5, 100, 2000, 0.0, 17};
    const double value = estimate_id(idprof::synth::hypercube(spec), with_k(20)).value;
    CHECK(value >= 4.0);
    CHECK(value <= 6.0);
}

}  // TEST_SUITE
