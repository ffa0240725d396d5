#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace dune {

/// splitmix64 step; advances the state and returns the next value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, tag, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= tag;
    h ^= splitmix64(s);
    s ^= index;
    h ^= splitmix64(s);
    return h;
}

// Stream tags for the experiment pipeline. Every consumer of randomness owns
// a stream derived from the master seed with one of these tags, so adding or
// removing draws in one place never shifts another.
namespace stream {
inline constexpr std::uint64_t kWeightInit = 0x57494e49;  // parameter initialization
inline constexpr std::uint64_t kShuffle = 0x53484646;     // per-epoch permutation
inline constexpr std::uint64_t kSample = 0x53414d50;      // interval instantiation
inline constexpr std::uint64_t kEval = 0x4556414c;        // test-time instantiation
inline constexpr std::uint64_t kTestNoise = 0x4e4f4953;   // per-image test noise
inline constexpr std::uint64_t kSweepPoint = 0x53575050;  // per-sweep-point seed
}  // namespace stream

/// Deterministic uniform generator. All floating-point output is produced
/// from raw mt19937_64 bits with fixed arithmetic, so sequences are
/// bit-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform draw in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [lo, hi); consumes one draw.
    double uniform(double lo, double hi) {
        return lo + uniform() * (hi - lo);
    }

    /// Standard normal via Box-Muller; consumes two draws.
    double gaussian() {
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Unbiased integer in [0, n) via multiply-shift; n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven by Rng::bounded.
template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(items[i - 1], items[j]);
    }
}

/// [0, count) as a shuffled permutation.
std::vector<std::size_t> random_permutation(std::size_t count, Rng& rng);

}  // namespace dune
