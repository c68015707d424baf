#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "point_cloud.hpp"

namespace idprof::npy {

/// Parsed NPY 1.0 header of a 2-D little-endian float32/float64 C-order array.
struct Header {
    Precision dtype = Precision::Double;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t data_offset = 0;  ///< byte offset of the first element
};

/// Parses the header at the start of `bytes`. Only the header bytes need to
/// be present. Throws Error(Format) for anything other than magic `\x93NUMPY`,
/// version 1.0, descr '<f4' or '<f8', fortran_order False, and a 2-tuple shape.
Header parse_header(std::string_view bytes);

/// Reads just the header of a file (used to cross-check row counts cheaply).
Header read_header(const std::filesystem::path& path);

PointCloud load(const std::filesystem::path& path);

/// Serialises to NPY 1.0 bytes; header padded so data starts on a 64-byte boundary.
std::string encode(const PointCloud& cloud, Precision dtype);

void save(const std::filesystem::path& path, const PointCloud& cloud, Precision dtype);

}  // namespace idprof::npy
