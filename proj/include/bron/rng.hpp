#pragma once
// Seeded randomness with platform-independent output.
//
// std::mt19937_64 is fully specified by the standard, but the std
// distributions are not, so bounded integers and unit reals are derived
// from raw engine output here.

#include <cstdint>
#include <random>
#include <unordered_set>
#include <utility>
#include <vector>

namespace bron {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent child seed for stream `index` of `master`.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    /// k distinct values from [0, n), in random order (Floyd's algorithm).
    std::vector<std::uint64_t> sample(std::uint64_t n, std::uint64_t k) {
        std::vector<std::uint64_t> out;
        std::unordered_set<std::uint64_t> taken;
        out.reserve(k);
        for (std::uint64_t j = n - k; j < n; ++j) {
            const std::uint64_t t = below(j + 1);
            const std::uint64_t pick = taken.insert(t).second ? t : j;
            if (pick == j) taken.insert(j);
            out.push_back(pick);
        }
        shuffle(out);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace bron
