#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <span>
#include <vector>

#include "bron/error.hpp"

namespace bron {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw DimensionMismatch("matrix data size does not match shape");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    /// Rows picked by index, in the given order.
    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            auto dst = out.row(i);
            std::copy(src.begin(), src.end(), dst.begin());
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Per-row (column, value) lists of the non-zero entries.
using SparseRows = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

inline SparseRows nonzeros(const Matrix& m) {
    SparseRows out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row[c] != 0.0) out[r].emplace_back(static_cast<std::uint32_t>(c), row[c]);
    }
    return out;
}

}  // namespace bron
