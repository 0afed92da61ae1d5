// rng.hpp

#ifndef KDDIDS_RNG_HPP
#define KDDIDS_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace kddids {

/// 64-bit FNV-1a; used for seed derivation and fingerprints, never for security
constexpr std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// expands one seed into an independent, named sub-seed
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
    return splitmix64(seed ^ fnv1a(stage));
}

/// Seeded generator with results that are identical on every platform.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard.  The standard distributions are not, so bounded integers and
/// reals are derived here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_{seed} {}

    std::uint64_t next() { return engine_(); }

    /// uniform integer in [0, bound); bound must be positive
    std::uint64_t below(std::uint64_t bound) {
        // reject the partial bucket at the top of the range
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// uniform real in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    /// moves a uniform sample of k items (without replacement) to the front
    template <typename T>
    void partial_shuffle(std::span<T> items, std::size_t k) {
        for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
            std::size_t j = i + below(items.size() - i);
            std::swap(items[i], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace kddids

#endif
