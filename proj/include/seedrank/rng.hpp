#pragma once

#include <cstdint>
#include <vector>

namespace seedrank::rng {

/// splitmix64 finalizer: full-avalanche 64-bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stateless combine of a key and a tag into a fresh 64-bit value.
/// Used to derive independent sub-streams: mix(seed, run_index),
/// mix(mix(seed, u), v), etc. The same inputs always give the same output,
/// on every platform.
inline constexpr std::uint64_t mix(std::uint64_t key, std::uint64_t tag) {
    return mix64(key + 0x9E3779B97F4A7C15ull * (tag + 0x632BE59BD9B4E019ull));
}

/// Maps a 64-bit word to a double in [0, 1) using the top 53 bits.
inline constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Minimal sequential generator (splitmix64). Deterministic and portable;
/// we intentionally avoid std distributions so results do not depend on the
/// standard library implementation.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : state_(mix64(seed ^ 0xA0761D6478BD642Full)) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return to_unit(next()); }

    /// Uniform integer in [0, bound), unbiased (rejection sampling).
    std::uint64_t next_below(std::uint64_t bound) {
        // bound == 0 is a caller bug; keep the check cheap.
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

/// In-place Fisher-Yates shuffle driven by Engine.
template <class T>
void shuffle(std::vector<T>& v, Engine& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(eng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace seedrank::rng
