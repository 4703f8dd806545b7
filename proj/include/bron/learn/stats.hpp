#pragma once
// Two-sample Wilcoxon rank-sum test and Bonferroni adjustment.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bron/error.hpp"
#include "bron/learn/metrics.hpp"

namespace bron {

inline constexpr std::size_t kExactRankSumMaxSize = 10;

struct RankSumResult {
    double rank_sum_a = 0.0;  // sum of midranks of sample a in the pooled sample
    double p_value = 1.0;     // two-sided
    bool exact = false;
};

namespace detail {

/// counts[s] = number of size-m subsets of {1..n} whose elements sum to s.
inline std::vector<long double> subset_sum_counts(std::size_t n, std::size_t m) {
    const std::size_t max_sum = m * n;
    std::vector<std::vector<long double>> f(m + 1, std::vector<long double>(max_sum + 1, 0.0L));
    f[0][0] = 1.0L;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = std::min(i, m); j >= 1; --j)
            for (std::size_t s = max_sum; s >= i; --s) f[j][s] += f[j - 1][s - i];
    return f[m];
}

}  // namespace detail

namespace detail {

struct PooledRanks {
    double rank_sum_a = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
};

inline PooledRanks pooled_ranks(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidConfig("rank-sum test needs non-empty samples");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);
    PooledRanks r;
    for (std::size_t i = 0; i < a.size(); ++i) r.rank_sum_a += ranks[i];
    std::sort(pooled.begin(), pooled.end());
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        const double t = static_cast<double>(j - i);
        r.tie_term += t * t * t - t;
        i = j;
    }
    return r;
}

inline double normal_p(const PooledRanks& r, std::size_t n1, std::size_t n2) {
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2), dn = dn1 + dn2;
    const double u = r.rank_sum_a - dn1 * (dn1 + 1.0) / 2.0;
    const double mu = dn1 * dn2 / 2.0;
    const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - r.tie_term / (dn * (dn - 1.0)));
    if (var <= 0.0) return 1.0;
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

inline double exact_p(const PooledRanks& r, std::size_t n1, std::size_t n2) {
    // Null distribution of the smaller sample's rank sum.
    const std::size_t n = n1 + n2;
    const bool a_small = n1 <= n2;
    const std::size_t m = a_small ? n1 : n2;
    const double w = a_small ? r.rank_sum_a : static_cast<double>(n * (n + 1) / 2) - r.rank_sum_a;
    const auto counts = subset_sum_counts(n, m);
    long double total = 0, le = 0, ge = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        total += counts[s];
        if (static_cast<double>(s) <= w) le += counts[s];
        if (static_cast<double>(s) >= w) ge += counts[s];
    }
    return std::min(1.0, static_cast<double>(2.0L * std::min(le, ge) / total));
}

}  // namespace detail

/// Exact when the smaller sample has at most kExactRankSumMaxSize values
/// and there are no ties; otherwise normal approximation with tie and
/// continuity corrections.
inline RankSumResult wilcoxon_ranksum_test(std::span<const double> a, std::span<const double> b) {
    const auto r = detail::pooled_ranks(a, b);
    RankSumResult res;
    res.rank_sum_a = r.rank_sum_a;
    res.exact = std::min(a.size(), b.size()) <= kExactRankSumMaxSize && r.tie_term == 0.0;
    res.p_value = res.exact ? detail::exact_p(r, a.size(), b.size()) : detail::normal_p(r, a.size(), b.size());
    return res;
}

/// Normal approximation regardless of sample size.
inline double wilcoxon_ranksum_normal(std::span<const double> a, std::span<const double> b) {
    return detail::normal_p(detail::pooled_ranks(a, b), a.size(), b.size());
}

inline double wilcoxon_ranksum(std::span<const double> a, std::span<const double> b) {
    return wilcoxon_ranksum_test(a, b).p_value;
}

/// min(1, p * m) for each p; m is the size of the comparison family.
inline std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m) {
    if (m < p_values.size()) throw InvalidConfig("Bonferroni family smaller than the number of p-values");
    std::vector<double> out;
    out.reserve(p_values.size());
    for (double p : p_values) out.push_back(std::min(1.0, p * static_cast<double>(m)));
    return out;
}

inline constexpr double kSignificanceLevel = 0.05;

}  // namespace bron
