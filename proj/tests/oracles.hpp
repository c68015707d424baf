#pragma once

// Independent reference implementations used only by the tests. They share no
// code with the library: plain loops, full sorts, textbook formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Row-major N x D matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Naive O(N^2 D) kNN: every pair, full sort.
inline std::vector<std::vector<double>> knn(const Matrix& m, std::size_t k) {
    std::vector<std::vector<double>> out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < m.rows; ++j) {
            if (i == j) continue;
            double s = 0.0;
            for (std::size_t c = 0; c < m.cols; ++c) {
                const double diff = m.at(i, c) - m.at(j, c);
                s += diff * diff;
            }
            d.push_back(std::sqrt(s));
        }
        std::sort(d.begin(), d.end());
        out[i].assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return out;
}

/// Local MLE with inverse-mean pooling, written directly from the
/// formula: pooled mean of (1/(k-1)) * sum ln(T_k/T_j), inverted.
inline double mle_mackay(const Matrix& m, std::size_t k) {
    const auto table = knn(m, k);
    double pooled = 0.0;
    for (const auto& row : table) {
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < k; ++j) s += std::log(row[k - 1] / row[j]);
        pooled += s / static_cast<double>(k - 1);
    }
    return static_cast<double>(table.size()) / pooled;
}

inline double mle_levina(const Matrix& m, std::size_t k) {
    const auto table = knn(m, k);
    double total = 0.0;
    for (const auto& row : table) {
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < k; ++j) s += std::log(row[k - 1] / row[j]);
        total += static_cast<double>(k - 1) / s;
    }
    return total / static_cast<double>(table.size());
}

/// Pearson r from the raw-moment covariance formula
/// (n*Sxy - Sx*Sy) / sqrt((n*Sxx - Sx^2)(n*Syy - Sy^2)), accumulated in long double.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

/// Least squares by solving the 2x2 normal equations [X^T X] b = X^T y with Eigen.
inline std::pair<double, double> normal_equations_fit(const std::vector<double>& x, const std::vector<double>& y) {
    Eigen::MatrixXd design(static_cast<Eigen::Index>(x.size()), 2);
    Eigen::VectorXd target(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        design(static_cast<Eigen::Index>(i), 0) = x[i];
        design(static_cast<Eigen::Index>(i), 1) = 1.0;
        target(static_cast<Eigen::Index>(i)) = y[i];
    }
    const Eigen::Vector2d b = (design.transpose() * design).ldlt().solve(design.transpose() * target);
    return {b(0), b(1)};
}

inline Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist;
    Matrix m{rows, cols, std::vector<double>(rows * cols)};
    for (double& v : m.data) v = dist(gen);
    return m;
}

/// Random rotation (Q of a Gaussian matrix, sign-fixed) followed by a translation.
inline Matrix rotate_translate(const Matrix& m, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist;
    const auto d = static_cast<Eigen::Index>(m.cols);
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = dist(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd shift(d);
    for (Eigen::Index i = 0; i < d; ++i) shift(i) = 10.0 * dist(gen);

    Matrix out{m.rows, m.cols, std::vector<double>(m.data.size())};
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (Eigen::Index i = 0; i < d; ++i) {
            double s = shift(i);
            for (Eigen::Index j = 0; j < d; ++j) s += q(i, j) * m.at(r, static_cast<std::size_t>(j));
            out.data[r * m.cols + static_cast<std::size_t>(i)] = s;
        }
    }
    return out;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace oracle
