#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "bron/learn/matrix.hpp"

namespace bron {

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct NaiveBayesParams {
    static constexpr double kDefaultAlpha = 1.0;          // additive smoothing (multinomial)
    static constexpr double kDefaultVarSmoothing = 1e-9;  // fraction of the largest variance (Gaussian)
    double alpha = kDefaultAlpha;
    double var_smoothing = kDefaultVarSmoothing;
};

/// Multinomial event model for token counts, Gaussian per-feature model
/// for dense vectors. Score is P(class 1 | x).
struct NaiveBayesModel {
    bool multinomial = true;
    double log_prior[2] = {0, 0};
    // multinomial: log feature probabilities; gaussian: means and variances
    std::vector<double> log_prob[2];
    std::vector<double> mean[2];
    std::vector<double> var[2];

    double log_odds(std::span<const double> x) const {
        double lj[2] = {log_prior[0], log_prior[1]};
        for (int c = 0; c < 2; ++c) {
            if (multinomial) {
                for (std::size_t j = 0; j < x.size(); ++j)
                    if (x[j] != 0.0) lj[c] += x[j] * log_prob[c][j];
            } else {
                for (std::size_t j = 0; j < x.size(); ++j) {
                    const double d = x[j] - mean[c][j];
                    lj[c] -= 0.5 * (std::log(2.0 * std::numbers::pi * var[c][j]) + d * d / var[c][j]);
                }
            }
        }
        return lj[1] - lj[0];
    }

    double score(std::span<const double> x) const { return sigmoid(log_odds(x)); }
};

inline NaiveBayesModel fit_naive_bayes(const Matrix& x, std::span<const int> y, bool multinomial,
                                       const NaiveBayesParams& p = {}) {
    const std::size_t d = x.cols();
    NaiveBayesModel m;
    m.multinomial = multinomial;
    double n_c[2] = {0, 0};
    for (int label : y) n_c[label == 1] += 1;
    for (int c = 0; c < 2; ++c) m.log_prior[c] = std::log(n_c[c] / static_cast<double>(y.size()));

    if (multinomial) {
        for (int c = 0; c < 2; ++c) {
            std::vector<double> counts(d, 0.0);
            double total = 0;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                if ((y[i] == 1) != (c == 1)) continue;
                auto row = x.row(i);
                for (std::size_t j = 0; j < d; ++j) counts[j] += row[j];
            }
            for (double v : counts) total += v;
            m.log_prob[c].resize(d);
            const double denom = std::log(total + p.alpha * static_cast<double>(d));
            for (std::size_t j = 0; j < d; ++j) m.log_prob[c][j] = std::log(counts[j] + p.alpha) - denom;
        }
        return m;
    }

    double max_var = 0;
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0, ss = 0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            s += x(i, j);
            ss += x(i, j) * x(i, j);
        }
        const double n = static_cast<double>(x.rows());
        max_var = std::max(max_var, ss / n - (s / n) * (s / n));
    }
    const double eps = std::max(p.var_smoothing * max_var, 1e-12);
    for (int c = 0; c < 2; ++c) {
        m.mean[c].assign(d, 0.0);
        m.var[c].assign(d, 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if ((y[i] == 1) != (c == 1)) continue;
            for (std::size_t j = 0; j < d; ++j) m.mean[c][j] += x(i, j);
        }
        for (double& v : m.mean[c]) v /= n_c[c];
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if ((y[i] == 1) != (c == 1)) continue;
            for (std::size_t j = 0; j < d; ++j) {
                const double dv = x(i, j) - m.mean[c][j];
                m.var[c][j] += dv * dv;
            }
        }
        for (double& v : m.var[c]) v = v / n_c[c] + eps;
    }
    return m;
}

}  // namespace bron
