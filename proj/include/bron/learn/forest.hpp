#pragma once
// CART decision trees (Gini impurity) and a bagged random forest.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "bron/learn/matrix.hpp"
#include "bron/rng.hpp"

namespace bron {

struct TreeParams {
    std::size_t max_features = 0;  // 0 = all features
    std::size_t min_samples_split = 2;
    std::size_t max_depth = 0;  // 0 = unlimited
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // fraction of class 1 among (weighted) training rows
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double score(std::span<const double> x) const {
        int i = 0;
        while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(i)].value;
    }
};

namespace detail {

inline double gini(double pos, double total) {
    if (total <= 0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> y, const TreeParams& p, Rng& rng)
        : x_(x), y_(y), p_(p), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> samples) {
        tree_.nodes.clear();
        grow(samples, 0);
        return std::move(tree_);
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    int grow(std::vector<std::size_t>& samples, std::size_t depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        double pos = 0;
        for (auto s : samples) pos += y_[s] == 1;
        const double total = static_cast<double>(samples.size());
        tree_.nodes[static_cast<std::size_t>(id)].value = pos / total;

        const bool pure = pos == 0 || pos == total;
        if (pure || samples.size() < p_.min_samples_split || (p_.max_depth && depth >= p_.max_depth)) return id;

        const Split best = find_split(samples, pos);
        if (best.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto s : samples) (x_(s, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(s);
        samples.clear();
        samples.shrink_to_fit();
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    /// Features are visited in random order until max_features non-constant
    /// ones have been evaluated. Equal impurity keeps the lower feature index.
    Split find_split(const std::vector<std::size_t>& samples, double pos_total) {
        const std::size_t d = x_.cols();
        const std::size_t budget = p_.max_features == 0 ? d : std::min(p_.max_features, d);
        std::vector<std::size_t> features(d);
        std::iota(features.begin(), features.end(), std::size_t{0});

        Split best;
        best.impurity = std::numeric_limits<double>::infinity();
        const double n = static_cast<double>(samples.size());
        std::size_t evaluated = 0;
        std::vector<std::pair<double, int>> vals(samples.size());

        for (std::size_t drawn = 0; drawn < d && evaluated < budget; ++drawn) {
            std::swap(features[drawn], features[drawn + rng_.below(d - drawn)]);
            const std::size_t f = features[drawn];

            for (std::size_t i = 0; i < samples.size(); ++i) vals[i] = {x_(samples[i], f), y_[samples[i]]};
            auto [lo, hi] = std::minmax_element(vals.begin(), vals.end(),
                                                [](const auto& a, const auto& b) { return a.first < b.first; });
            if (lo->first == hi->first) continue;
            ++evaluated;

            std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            double left_n = 0, left_pos = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left_n += 1;
                left_pos += vals[i].second == 1;
                if (vals[i].first == vals[i + 1].first) continue;
                const double right_n = n - left_n;
                const double imp = (left_n * gini(left_pos, left_n) + right_n * gini(pos_total - left_pos, right_n)) / n;
                const bool better = imp < best.impurity - 1e-12 ||
                                    (imp <= best.impurity + 1e-12 && static_cast<int>(f) < best.feature);
                if (better) {
                    best.feature = static_cast<int>(f);
                    best.impurity = imp;
                    best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                    if (best.threshold >= vals[i + 1].first) best.threshold = vals[i].first;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    std::span<const int> y_;
    TreeParams p_;
    Rng& rng_;
    DecisionTree tree_;
};

}  // namespace detail

/// Fits one tree on `samples` (row indices, repeats allowed).
inline DecisionTree fit_tree(const Matrix& x, std::span<const int> y, const TreeParams& p, Rng& rng,
                             std::vector<std::size_t> samples) {
    return detail::TreeBuilder(x, y, p, rng).build(std::move(samples));
}

inline DecisionTree fit_tree(const Matrix& x, std::span<const int> y, const TreeParams& p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> all(x.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return fit_tree(x, y, p, rng, std::move(all));
}

struct ForestParams {
    static constexpr std::size_t kDefaultTrees = 100;
    std::size_t trees = kDefaultTrees;
    std::size_t max_features = 0;  // 0 = floor(sqrt(d))
    bool bootstrap = true;
    std::size_t min_samples_split = 2;
    std::size_t max_depth = 0;
};

/// Score is the mean of the trees' leaf class-1 fractions.
struct ForestModel {
    std::vector<DecisionTree> trees;

    double score(std::span<const double> x) const {
        double s = 0;
        for (const auto& t : trees) s += t.score(x);
        return s / static_cast<double>(trees.size());
    }
};

/// Tree t is grown with seed derive_seed(seed, t), which draws its
/// bootstrap sample (if enabled) and then its feature order.
inline ForestModel fit_forest(const Matrix& x, std::span<const int> y, const ForestParams& p, std::uint64_t seed) {
    const std::size_t d = x.cols();
    TreeParams tp;
    tp.max_features = p.max_features ? p.max_features
                                     : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    tp.min_samples_split = p.min_samples_split;
    tp.max_depth = p.max_depth;

    ForestModel m;
    m.trees.reserve(p.trees);
    for (std::size_t t = 0; t < p.trees; ++t) {
        Rng rng(derive_seed(seed, t));
        std::vector<std::size_t> samples(x.rows());
        if (p.bootstrap) {
            for (auto& s : samples) s = rng.below(x.rows());
        } else {
            std::iota(samples.begin(), samples.end(), std::size_t{0});
        }
        m.trees.push_back(fit_tree(x, y, tp, rng, std::move(samples)));
    }
    return m;
}

}  // namespace bron
