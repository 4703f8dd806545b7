#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "bron/learn/matrix.hpp"

namespace bron {

struct KnnParams {
    static constexpr std::size_t kDefaultK = 5;
    std::size_t k = kDefaultK;
};

/// Euclidean k-nearest neighbours. Score is the fraction of positive
/// labels among the k nearest training rows; distance ties go to the lower
/// row index.
struct KnnModel {
    std::size_t k = KnnParams::kDefaultK;
    Matrix train_x;
    std::vector<int> train_y;

    double score(std::span<const double> x) const {
        const std::size_t n = train_x.rows();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto r = train_x.row(i);
            double s = 0;
            for (std::size_t j = 0; j < r.size(); ++j) {
                const double d = r[j] - x[j];
                s += d * d;
            }
            dist[i] = {s, i};
        }
        const std::size_t kk = std::min(k, n);
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
        double pos = 0;
        for (std::size_t i = 0; i < kk; ++i) pos += train_y[dist[i].second] == 1;
        return pos / static_cast<double>(kk);
    }
};

inline KnnModel fit_knn(const Matrix& x, std::span<const int> y, const KnnParams& p = {}) {
    return KnnModel{p.k, x, std::vector<int>(y.begin(), y.end())};
}

}  // namespace bron
