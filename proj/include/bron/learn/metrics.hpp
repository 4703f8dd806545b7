#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "bron/error.hpp"

namespace bron {

/// Average ranks (1-based) with ties sharing the mean of their positions.
inline std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half (Mann-Whitney formulation).
inline double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw DimensionMismatch("scores and labels differ in length");
    const auto ranks = midranks(scores);
    double pos = 0, rank_sum = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == 1) {
            ++pos;
            rank_sum += ranks[i];
        }
    const double neg = static_cast<double>(labels.size()) - pos;
    if (pos == 0 || neg == 0) throw SingleClass("AUC needs both classes");
    return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Confusion confusion(std::span<const int> pred, std::span<const int> labels) {
    if (pred.size() != labels.size()) throw DimensionMismatch("predictions and labels differ in length");
    Confusion c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1 && labels[i] == 1) ++c.tp;
        else if (pred[i] == 1) ++c.fp;
        else if (labels[i] == 1) ++c.fn;
        else ++c.tn;
    }
    return c;
}

/// F1 of class 1; 0 when precision + recall is 0.
inline double f1(const Confusion& c) {
    const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp) + static_cast<double>(c.fn);
    return c.tp == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}
inline double f1(std::span<const int> pred, std::span<const int> labels) { return f1(confusion(pred, labels)); }

inline double accuracy(const Confusion& c) {
    const std::size_t n = c.tp + c.fp + c.fn + c.tn;
    return n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
}

/// 1 - accuracy.
inline double error_rate(const Confusion& c) {
    const std::size_t n = c.tp + c.fp + c.fn + c.tn;
    return n == 0 ? 0.0 : static_cast<double>(c.fp + c.fn) / static_cast<double>(n);
}

struct MetricSet {
    double error = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
};

inline MetricSet evaluate(std::span<const double> scores, std::span<const int> pred, std::span<const int> labels) {
    const Confusion c = confusion(pred, labels);
    return {error_rate(c), auc(scores, labels), f1(c)};
}

}  // namespace bron
