#ifndef HMO_RNG_HPP
#define HMO_RNG_HPP

#include <cmath>
#include <cstdint>

namespace hmo {

/// Deterministic counter-based generator (splitmix64 core). Every stochastic
/// component owns one of these so that runs replay bit-for-bit across
/// platforms; the standard <random> distributions are not used because their
/// output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        // Multiplicative range reduction; bias is negligible for bound << 2^64.
        unsigned __int128 m =
            static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound);
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller, one spare cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Derived generator for an independent stream.
    Rng split(std::uint64_t stream) {
        std::uint64_t s = next_u64();
        return Rng(s ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Order-dependent seed combiner for keying generators by tuples such as
/// (problem, dimension, instance).
inline std::uint64_t seed_mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    return h ^ (h >> 33);
}

template <typename... Rest>
std::uint64_t seed_mix(std::uint64_t h, std::uint64_t v, Rest... rest) {
    return seed_mix(seed_mix(h, v), rest...);
}

}  // namespace hmo

#endif  // HMO_RNG_HPP
