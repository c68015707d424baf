#include "point_cloud.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace idprof {

PointCloud::PointCloud(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    validate();
}

PointCloud::PointCloud(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    validate();
}

Precision PointCloud::precision() const noexcept {
    return std::holds_alternative<std::vector<float>>(data_) ? Precision::Single
                                                             : Precision::Double;
}

double PointCloud::value(std::size_t row, std::size_t col) const noexcept {
    return visit([&](auto span) { return static_cast<double>(span[row * cols_ + col]); });
}

std::vector<double> PointCloud::to_double() const {
    return visit([](auto span) { return std::vector<double>(span.begin(), span.end()); });
}

void PointCloud::validate() const {
    if (rows_ < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "point cloud needs at least 2 rows, got " + std::to_string(rows_));
    }
    if (cols_ < 1) {
        throw Error(ErrorCode::InvalidArgument, "point cloud needs at least 1 column");
    }
    visit([&](auto span) {
        if (span.size() / cols_ != rows_ || span.size() % cols_ != 0) {
            throw Error(ErrorCode::InvalidArgument,
                        "data length " + std::to_string(span.size()) + " does not match " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
        }
        for (std::size_t i = 0; i < span.size(); ++i) {
            if (!std::isfinite(span[i])) {
                throw Error(ErrorCode::NonFinite,
                            "non-finite value at row " + std::to_string(i / cols_) +
                                ", column " + std::to_string(i % cols_));
            }
        }
    });
}

}  // namespace idprof
