#pragma once
// One-hidden-layer perceptron: ReLU hidden units, sigmoid output,
// log-loss, mini-batch Adam with L2 penalty.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "bron/learn/matrix.hpp"
#include "bron/learn/naive_bayes.hpp"
#include "bron/rng.hpp"

namespace bron {

struct MlpParams {
    static constexpr std::size_t kDefaultHidden = 100;
    static constexpr std::size_t kDefaultEpochs = 200;
    static constexpr double kDefaultLearningRate = 1e-3;
    static constexpr double kDefaultL2 = 1e-4;
    static constexpr std::size_t kDefaultBatchSize = 200;

    std::size_t hidden = kDefaultHidden;
    std::size_t epochs = kDefaultEpochs;
    double learning_rate = kDefaultLearningRate;
    double l2 = kDefaultL2;
    std::size_t batch_size = kDefaultBatchSize;
};

struct MlpModel {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::vector<double> w1;  // inputs x hidden, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden
    double b2 = 0.0;

    double logit(std::span<const double> x) const {
        std::vector<double> h(b1);
        for (std::size_t j = 0; j < inputs; ++j) {
            if (x[j] == 0.0) continue;
            const double* wr = &w1[j * hidden];
            for (std::size_t k = 0; k < hidden; ++k) h[k] += x[j] * wr[k];
        }
        double z = b2;
        for (std::size_t k = 0; k < hidden; ++k) z += std::max(0.0, h[k]) * w2[k];
        return z;
    }

    double score(std::span<const double> x) const { return sigmoid(logit(x)); }
};

namespace detail {

struct Adam {
    static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    std::vector<double> m, v;
    double lr;
    std::size_t t = 0;

    Adam(std::size_t n, double learning_rate) : m(n, 0.0), v(n, 0.0), lr(learning_rate) {}

    void step(std::span<double> params, std::span<const double> grad, double b1t, double b2t) {
        const double a = lr * std::sqrt(1.0 - b2t) / (1.0 - b1t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * grad[i];
            v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
            params[i] -= a * m[i] / (std::sqrt(v[i]) + kEps);
        }
    }
};

}  // namespace detail

inline MlpModel fit_mlp(const Matrix& x, std::span<const int> y, const MlpParams& p, std::uint64_t seed) {
    const std::size_t n = x.rows(), d = x.cols(), hdim = p.hidden;
    MlpModel m;
    m.inputs = d;
    m.hidden = hdim;
    Rng rng(seed);
    const double bound1 = std::sqrt(6.0 / static_cast<double>(d + hdim));
    const double bound2 = std::sqrt(6.0 / static_cast<double>(hdim + 1));
    m.w1.resize(d * hdim);
    for (double& w : m.w1) w = rng.uniform(-bound1, bound1);
    m.b1.resize(hdim);
    for (double& w : m.b1) w = rng.uniform(-bound1, bound1);
    m.w2.resize(hdim);
    for (double& w : m.w2) w = rng.uniform(-bound2, bound2);
    m.b2 = rng.uniform(-bound2, bound2);

    // Parameters packed as [w1 | b1 | w2 | b2] for the optimizer.
    const std::size_t n_params = d * hdim + hdim + hdim + 1;
    std::vector<double> params(n_params), grad(n_params);
    auto pack = [&] {
        auto it = std::copy(m.w1.begin(), m.w1.end(), params.begin());
        it = std::copy(m.b1.begin(), m.b1.end(), it);
        it = std::copy(m.w2.begin(), m.w2.end(), it);
        *it = m.b2;
    };
    auto unpack = [&] {
        auto it = params.begin();
        std::copy(it, it + static_cast<std::ptrdiff_t>(d * hdim), m.w1.begin());
        it += static_cast<std::ptrdiff_t>(d * hdim);
        std::copy(it, it + static_cast<std::ptrdiff_t>(hdim), m.b1.begin());
        it += static_cast<std::ptrdiff_t>(hdim);
        std::copy(it, it + static_cast<std::ptrdiff_t>(hdim), m.w2.begin());
        it += static_cast<std::ptrdiff_t>(hdim);
        m.b2 = *it;
    };
    pack();

    const SparseRows rows = nonzeros(x);
    detail::Adam adam(n_params, p.learning_rate);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = std::clamp<std::size_t>(p.batch_size, 1, n);
    std::vector<double> h(hdim), dh(hdim);
    double b1t = 1.0, b2t = 1.0;

    for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            const double bs = static_cast<double>(end - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            double* gw1 = grad.data();
            double* gb1 = gw1 + d * hdim;
            double* gw2 = gb1 + hdim;
            double* gb2 = gw2 + hdim;
            for (std::size_t s = start; s < end; ++s) {
                const auto& row = rows[order[s]];
                std::copy(m.b1.begin(), m.b1.end(), h.begin());
                for (auto [j, v] : row) {
                    const double* wr = &m.w1[j * hdim];
                    for (std::size_t k = 0; k < hdim; ++k) h[k] += v * wr[k];
                }
                double z = m.b2;
                for (std::size_t k = 0; k < hdim; ++k) z += std::max(0.0, h[k]) * m.w2[k];
                const double dz = (sigmoid(z) - (y[order[s]] == 1 ? 1.0 : 0.0)) / bs;
                *gb2 += dz;
                for (std::size_t k = 0; k < hdim; ++k) {
                    const double a = std::max(0.0, h[k]);
                    gw2[k] += dz * a;
                    dh[k] = h[k] > 0.0 ? dz * m.w2[k] : 0.0;
                    gb1[k] += dh[k];
                }
                for (auto [j, v] : row) {
                    double* gr = gw1 + j * hdim;
                    for (std::size_t k = 0; k < hdim; ++k) gr[k] += v * dh[k];
                }
            }
            const double reg = p.l2 / bs;
            for (std::size_t i = 0; i < d * hdim; ++i) gw1[i] += reg * m.w1[i];
            for (std::size_t k = 0; k < hdim; ++k) gw2[k] += reg * m.w2[k];

            b1t *= detail::Adam::kBeta1;
            b2t *= detail::Adam::kBeta2;
            adam.step(params, grad, b1t, b2t);
            unpack();
        }
    }
    return m;
}

}  // namespace bron
