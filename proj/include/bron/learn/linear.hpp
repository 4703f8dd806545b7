#pragma once
// Linear classifiers trained by per-sample stochastic (sub)gradient steps:
// logistic regression on log-loss, and a linear SVM on hinge loss.
//
// The weight vector is kept as scale * v so the L2 shrink of every step
// costs O(1) and updates touch only the non-zero inputs.

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "bron/learn/matrix.hpp"
#include "bron/learn/naive_bayes.hpp"
#include "bron/rng.hpp"

namespace bron {

struct LinearParams {
    double learning_rate = 1e-3;
    std::size_t epochs = 1000;
    double l2 = 1e-4;
};

struct LogisticParams : LinearParams {
    static constexpr double kDefaultLearningRate = 1e-3;
    static constexpr std::size_t kDefaultEpochs = 1000;
    static constexpr double kDefaultL2 = 1e-4;
    LogisticParams() : LinearParams{kDefaultLearningRate, kDefaultEpochs, kDefaultL2} {}
};

struct SvmParams : LinearParams {
    static constexpr double kDefaultLearningRate = 1e-2;  // eta0 of eta_t = eta0 / (1 + l2 * eta0 * t)
    static constexpr std::size_t kDefaultEpochs = 1000;
    static constexpr double kDefaultL2 = 1e-4;
    SvmParams() : LinearParams{kDefaultLearningRate, kDefaultEpochs, kDefaultL2} {}
};

/// w . x + b. `probabilistic` models report sigmoid(margin).
struct LinearModel {
    std::vector<double> w;
    double b = 0.0;
    bool probabilistic = false;

    double margin(std::span<const double> x) const { return dot(w, x) + b; }
    double score(std::span<const double> x) const { return probabilistic ? sigmoid(margin(x)) : margin(x); }
};

namespace detail {

class ScaledWeights {
public:
    explicit ScaledWeights(std::size_t d) : v_(d, 0.0) {}

    double dot(const std::vector<std::pair<std::uint32_t, double>>& x) const {
        double s = 0;
        for (auto [j, val] : x) s += v_[j] * val;
        return s * scale_;
    }
    void shrink(double factor) {
        scale_ *= factor;
        if (scale_ < 1e-9) renormalize();
    }
    void add(const std::vector<std::pair<std::uint32_t, double>>& x, double step) {
        for (auto [j, val] : x) v_[j] += step * val / scale_;
    }
    std::vector<double> weights() const {
        std::vector<double> w(v_);
        for (double& x : w) x *= scale_;
        return w;
    }

private:
    void renormalize() {
        for (double& x : v_) x *= scale_;
        scale_ = 1.0;
    }
    std::vector<double> v_;
    double scale_ = 1.0;
};

template <class Step>
LinearModel fit_sgd(const Matrix& x, std::span<const int> y, const LinearParams& p, std::uint64_t seed,
                    bool probabilistic, Step step) {
    const SparseRows rows = nonzeros(x);
    ScaledWeights w(x.cols());
    double b = 0.0;
    Rng rng(seed);
    std::vector<std::size_t> order(x.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) step(w, b, rows[i], y[i] == 1, t++);
    }
    return LinearModel{w.weights(), b, probabilistic};
}

}  // namespace detail

inline LinearModel fit_logistic(const Matrix& x, std::span<const int> y, const LogisticParams& p,
                                std::uint64_t seed) {
    return detail::fit_sgd(x, y, p, seed, true,
                           [&p](detail::ScaledWeights& w, double& b, const auto& row, bool pos, std::size_t) {
                               const double g = sigmoid(w.dot(row) + b) - (pos ? 1.0 : 0.0);
                               w.shrink(1.0 - p.learning_rate * p.l2);
                               w.add(row, -p.learning_rate * g);
                               b -= p.learning_rate * g;
                           });
}

inline LinearModel fit_linear_svm(const Matrix& x, std::span<const int> y, const SvmParams& p, std::uint64_t seed) {
    return detail::fit_sgd(x, y, p, seed, false,
                           [&p](detail::ScaledWeights& w, double& b, const auto& row, bool pos, std::size_t t) {
                               const double eta =
                                   p.learning_rate / (1.0 + p.l2 * p.learning_rate * static_cast<double>(t));
                               const double sign = pos ? 1.0 : -1.0;
                               const bool violated = sign * (w.dot(row) + b) < 1.0;
                               w.shrink(1.0 - eta * p.l2);
                               if (violated) {
                                   w.add(row, eta * sign);
                                   b += eta * sign;
                               }
                           });
}

}  // namespace bron
