#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace idprof {

enum class Precision { Single, Double };

/// Dense N x D row-major matrix of finite reals. Storage keeps the precision it
/// was created with (float32 activation dumps stay float32 in memory); all
/// arithmetic downstream promotes to double.
///
/// Invariants, checked on construction: N >= 2, D >= 1, every entry finite.
class PointCloud {
public:
    PointCloud(std::size_t rows, std::size_t cols, std::vector<double> data);
    PointCloud(std::size_t rows, std::size_t cols, std::vector<float> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Precision precision() const noexcept;

    double value(std::size_t row, std::size_t col) const noexcept;

    /// Copy of the data promoted to double, row-major.
    std::vector<double> to_double() const;

    /// Calls `fn(std::span<const T>)` with the typed backing store.
    template <typename Fn>
    decltype(auto) visit(Fn&& fn) const {
        return std::visit(
            [&](const auto& v) -> decltype(auto) {
                using T = typename std::decay_t<decltype(v)>::value_type;
                return fn(std::span<const T>(v));
            },
            data_);
    }

private:
    void validate() const;

    std::size_t rows_;
    std::size_t cols_;
    std::variant<std::vector<float>, std::vector<double>> data_;
};

}  // namespace idprof
