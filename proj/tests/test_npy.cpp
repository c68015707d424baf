#include <doctest.h>

#include <cmath>
#include <cstring>

#include "error.hpp"
#include "npy.hpp"
#include "test_util.hpp"

using idprof::ErrorCode;
using idprof::Precision;
namespace npy = idprof::npy;

namespace {

// Header bytes laid out the way numpy 1.x writes them.
std::string numpy_header(const std::string& dict_body) {
    std::string dict = dict_body;
    const std::size_t total = 10 + dict.size() + 1;
    dict.append((total + 63) / 64 * 64 - total, ' ');
    dict += '\n';
    std::string out("\x93NUMPY\x01\x00", 8);
    out += static_cast<char>(dict.size() & 0xFF);
    out += static_cast<char>(dict.size() >> 8);
    return out + dict;
}

ErrorCode header_error(const std::string& bytes) {
    try {
        npy::parse_header(bytes);
    } catch (const idprof::Error& e) {
        return e.code();
    }
    FAIL("header accepted");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("npy") {

TEST_CASE("parses a numpy-style header") {
    const auto h = npy::parse_header(numpy_header("{'descr': '<f8', 'fortran_order': False, 'shape': (3, 2), }"));
    CHECK(h.dtype == Precision::Double);
    CHECK(h.rows == 3);
    CHECK(h.cols == 2);
    CHECK(h.data_offset == 128);
    const auto f = npy::parse_header(numpy_header("{'descr': '<f4', 'fortran_order': False, 'shape': (1750, 150528)}"));
    CHECK(f.dtype == Precision::Single);
    CHECK(f.cols == 150528);
}

TEST_CASE("rejects everything outside the supported subset") {
    const std::string good = "{'descr': '<f8', 'fortran_order': False, 'shape': (3, 2), }";
    std::string bad_magic = numpy_header(good);
    bad_magic[1] = 'M';
    CHECK(header_error(bad_magic) == ErrorCode::Format);

    std::string v2 = numpy_header(good);
    v2[6] = '\x02';
    CHECK(header_error(v2) == ErrorCode::Format);
    std::string v11 = numpy_header(good);
    v11[7] = '\x01';
    CHECK(header_error(v11) == ErrorCode::Format);

    CHECK(header_error(numpy_header("{'descr': '>f8', 'fortran_order': False, 'shape': (3, 2), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<i4', 'fortran_order': False, 'shape': (3, 2), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f2', 'fortran_order': False, 'shape': (3, 2), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f8', 'fortran_order': True, 'shape': (3, 2), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f8', 'fortran_order': False, 'shape': (6,), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f8', 'fortran_order': False, 'shape': (1, 3, 2), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f8', 'shape': (3, 2), }")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f8', 'fortran_order': False, 'shape': (3, 2), 'x': 1}")) == ErrorCode::Format);
    CHECK(header_error(numpy_header("{'descr': '<f8', 'descr': '<f8', 'fortran_order': False, 'shape': (3, 2)}")) ==
          ErrorCode::Format);
    CHECK(header_error(std::string("\x93NUMPY\x01\x00", 8)) == ErrorCode::Format);

    std::string no_newline = numpy_header(good);
    no_newline.back() = ' ';
    CHECK(header_error(no_newline) == ErrorCode::Format);
}

TEST_CASE("round trip preserves values in both precisions") {
    testutil::TempDir dir("npy");
    std::vector<double> values;
    for (int i = 0; i < 5 * 7; ++i) values.push_back(0.1 * i - 1.3);
    const idprof::PointCloud cloud(5, 7, values);

    npy::save(dir / "a.npy", cloud, Precision::Double);
    const auto back = npy::load(dir / "a.npy");
    CHECK(back.precision() == Precision::Double);
    CHECK(back.to_double() == values);

    npy::save(dir / "b.npy", cloud, Precision::Single);
    const auto single = npy::load(dir / "b.npy");
    CHECK(single.precision() == Precision::Single);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(single.to_double()[i] == static_cast<double>(static_cast<float>(values[i])));
    }
    CHECK(npy::read_header(dir / "b.npy").data_offset % 64 == 0);
}

TEST_CASE("data length must match the shape exactly") {
    testutil::TempDir dir("npy_len");
    const idprof::PointCloud cloud(2, 2, std::vector<double>{1, 2, 3, 4});
    std::string bytes = npy::encode(cloud, Precision::Double);
    testutil::write_text(dir / "short.npy", bytes.substr(0, bytes.size() - 1));
    testutil::write_text(dir / "long.npy", bytes + "x");
    for (const char* name : {"short.npy", "long.npy"}) {
        try {
            npy::load(dir / name);
            FAIL("accepted ", name);
        } catch (const idprof::Error& e) {
            CHECK(e.code() == ErrorCode::Format);
        }
    }
}

TEST_CASE("non-finite values and missing files") {
    testutil::TempDir dir("npy_nan");
    std::string bytes = npy::encode(idprof::PointCloud(2, 1, std::vector<double>{1, 2}), Precision::Double);
    const double nan = std::nan("");
    std::memcpy(bytes.data() + bytes.size() - 8, &nan, 8);
    testutil::write_text(dir / "nan.npy", bytes);
    try {
        npy::load(dir / "nan.npy");
        FAIL("accepted NaN");
    } catch (const idprof::Error& e) {
        CHECK(e.code() == ErrorCode::NonFinite);
    }
    try {
        npy::load(dir / "absent.npy");
        FAIL("loaded a missing file");
    } catch (const idprof::Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

}  // TEST_SUITE
