#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "cli_runner.hpp"
#include "npy.hpp"
#include "synth.hpp"

using testutil::run_cli;
using testutil::shell_quote;

namespace {

std::string q(const std::filesystem::path& p) { return shell_quote(p.string()); }

void write_cube(const std::filesystem::path& path, std::size_t d, std::size_t n = 2000, std::size_t D = 100) {
    idprof::synth::ManifoldSpec s;
    s.kind = idprof::synth::ManifoldKind::Hypercube;
    s.intrinsic_dim = d;
    s.ambient_dim = D;
    s.n_points = n;
    s.seed = 1;
    idprof::npy::save(path, idprof::synth::generate(s), idprof::Precision::Single);
}

nlohmann::json error_doc(const std::string& err) { return nlohmann::json::parse(err); }

}  // namespace

TEST_CASE("estimate recovers a five-dimensional cube") {
    testutil::TempDir dir("cli_est");
    write_cube(dir / "cube.npy", 5);
    const auto r = run_cli("estimate " + q(dir / "cube.npy"), dir.path());
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["kind"] == "idprof.estimate");
    CHECK(doc["value"].get<double>() >= 4.0);
    CHECK(doc["value"].get<double>() <= 6.0);
    CHECK(doc["n_used"] == 2000);

    const auto tagged = run_cli("estimate " + q(dir / "cube.npy") + " --dataset-id cube --domain natural --bootstrap 5 --out " +
                                    q(dir / "est"),
                                dir.path());
    REQUIRE(tagged.exit_code == 0);
    const auto est = nlohmann::json::parse(testutil::read_text(dir / "est" / "estimate.json"));
    CHECK(est["dataset_id"] == "cube");
    CHECK(est["spread"].is_number());
}

TEST_CASE("reruns and thread counts give identical bytes") {
    testutil::TempDir dir("cli_det");
    write_cube(dir / "cube.npy", 3, 800, 40);
    const auto a = run_cli("estimate " + q(dir / "cube.npy") + " --threads 1", dir.path());
    const auto b = run_cli("estimate " + q(dir / "cube.npy") + " --threads 1", dir.path());
    const auto c = run_cli("estimate " + q(dir / "cube.npy") + " --threads 4", dir.path());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    testutil::write_text(dir / "spec.json",
                         R"({"kind": "layered_stack", "id_sequence": [2, 6, 3], "n_points": 400, "ambient_dim": 30, "seed": 2})");
    REQUIRE(run_cli("synth " + q(dir / "spec.json") + " --out " + q(dir / "stack"), dir.path()).exit_code == 0);
    const std::string formats = " --formats json,csv,svg --out ";
    REQUIRE(run_cli("profile " + q(dir / "stack/manifest.json") + " --threads 1" + formats + q(dir / "p1"), dir.path())
                .exit_code == 0);
    REQUIRE(run_cli("profile " + q(dir / "stack/manifest.json") + " --threads 3" + formats + q(dir / "p2"), dir.path())
                .exit_code == 0);
    for (const char* f : {"profile.json", "curve.csv", "curve.svg"}) {
        CHECK(testutil::read_text(dir / "p1" / f) == testutil::read_text(dir / "p2" / f));
        CHECK(!testutil::read_text(dir / "p1" / f).empty());
    }
    const auto profile = nlohmann::json::parse(testutil::read_text(dir / "p1/profile.json"));
    CHECK(profile["peak"]["i_star"] == 2);
}

TEST_CASE("failures exit nonzero with a named error") {
    testutil::TempDir dir("cli_err");
    testutil::write_text(dir / "bad.npy", "\x93NUMPY garbage");
    auto r = run_cli("estimate " + q(dir / "bad.npy"), dir.path());
    CHECK(r.exit_code != 0);
    CHECK(error_doc(r.err)["error"] == "FormatError");

    write_cube(dir / "small.npy", 2, 50, 4);
    r = run_cli("estimate " + q(dir / "small.npy") + " --k 50", dir.path());
    CHECK(r.exit_code != 0);
    CHECK(error_doc(r.err)["error"] == "KTooLarge");

    testutil::write_text(dir / "manifest.json",
                         R"({"model_id": "m", "dataset_id": "d", "L": 2,
                             "metadata": {"train_size": 1, "task": "t", "input_dims": 4, "class_count": 2},
                             "layers": [{"index": 1, "name": "a", "dump": "small.npy"},
                                        {"index": 2, "name": "b", "dump": "gone.npy"}]})");
    r = run_cli("profile " + q(dir / "manifest.json") + " --out " + q(dir / "out"), dir.path());
    CHECK(r.exit_code != 0);
    CHECK(error_doc(r.err)["error"] == "MissingDump");

    r = run_cli("correlate " + q(dir.path()) + " --out " + q(dir / "corr"), dir.path());
    CHECK(r.exit_code != 0);
    CHECK(error_doc(r.err)["error"] == "TooFewDatasets");

    testutil::write_text(dir / "spec.json", R"({"kind": "hypersphere", "intrinsic_dim": 3, "ambient_dim": 3, "n_points": 10, "seed": 1})");
    r = run_cli("synth " + q(dir / "spec.json") + " --out " + q(dir / "syn"), dir.path());
    CHECK(r.exit_code != 0);
    CHECK(error_doc(r.err)["error"] == "SpecInvalid");
}

TEST_CASE("argument parsing") {
    testutil::TempDir dir("cli_args");
    CHECK(run_cli("estimate x.npy --no-such-flag", dir.path()).exit_code != 0);
    CHECK(run_cli("estimate x.npy --agg median", dir.path()).exit_code != 0);
    CHECK(run_cli("", dir.path()).exit_code != 0);

    const auto help = run_cli("estimate --help", dir.path());
    CHECK(help.exit_code == 0);
    for (const char* flag : {"--k", "--agg", "--subsample", "--seed", "--bootstrap", "--jitter", "--threads",
                             "--dataset-id", "--domain", "--out"}) {
        CHECK_MESSAGE(help.out.find(flag) != std::string::npos, flag);
    }
    const auto top = run_cli("--help", dir.path());
    for (const char* sub : {"estimate", "profile", "correlate", "sweep", "synth"}) {
        CHECK_MESSAGE(top.out.find(sub) != std::string::npos, sub);
    }
}

TEST_CASE("correlate and sweep write their tables") {
    testutil::TempDir dir("cli_tables");
    const auto recs = dir / "N500";
    for (int i = 1; i <= 3; ++i) {
        const std::string id = "d" + std::to_string(i);
        write_cube(dir / (id + ".npy"), static_cast<std::size_t>(i + 1), 300, 10);
        REQUIRE(run_cli("estimate " + q(dir / (id + ".npy")) + " --k 10 --dataset-id " + id + " --domain medical --out " +
                            q(dir / "est" / id),
                        dir.path())
                    .exit_code == 0);
        std::filesystem::create_directories(recs);
        std::filesystem::copy_file(dir / "est" / id / "estimate.json", recs / (id + "_est.json"));
        testutil::write_text(recs / (id + "_peak.json"),
                             "{\"kind\": \"idprof.peak\", \"dataset_id\": \"" + id +
                                 "\", \"architecture\": \"unet\", \"run\": \"r\", \"d_max\": " + std::to_string(5 * i) +
                                 ", \"rel_depth\": 0.5}");
    }
    auto r = run_cli("correlate " + q(recs) + " --formats json,csv,svg --out " + q(dir / "corr"), dir.path());
    REQUIRE(r.exit_code == 0);
    for (const char* f : {"correlation.json", "peaks.json", "correlation.csv", "peaks.csv", "correlation.svg"}) {
        CHECK_MESSAGE(std::filesystem::exists(dir / "corr" / f), f);
    }
    const auto corr = nlohmann::json::parse(testutil::read_text(dir / "corr/correlation.json"));
    CHECK(corr["r"].get<double>() > 0.9);

    r = run_cli("sweep " + q(dir.path()) + " --formats csv,json --out " + q(dir / "sweep"), dir.path());
    REQUIRE(r.exit_code == 0);
    CHECK(testutil::read_text(dir / "sweep/sweep.csv").find("medical,500,3,10,") != std::string::npos);
}
