#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <vector>

namespace geosig {

// SplitMix64 (Vigna's reference mixer). Chosen because it is trivially
// splittable: independent streams are obtained by re-seeding with a mixed
// (seed, stream) pair, so Monte Carlo trials can be derived per-index and
// results do not depend on evaluation order.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53-bit resolution
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]; safe as a log() argument
    double next_unit_open() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    std::size_t next_index(std::size_t n) {
        return n == 0 ? 0 : static_cast<std::size_t>(next() % static_cast<std::uint64_t>(n));
    }

    // standard normal via Box-Muller; consumes exactly two draws per pair
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Mixes a root seed with a stream index into a fresh SplitMix64 seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0xA24BAED4963EE407ULL * (stream + 1)));
    return g.next();
}

// Fisher-Yates with our own generator; std::shuffle output is
// implementation-defined and would break byte-for-byte reproducibility.
template <class T>
inline void seeded_shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = rng.next_index(i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace geosig
