#pragma once

#include <cstdint>
#include <random>

namespace mathforge {

/// Deterministic draw stream for worksheet generation.
///
/// The engine is MT19937-64 (std::mt19937_64, whose output sequence the C++
/// standard fixes) seeded with the 64-bit seed directly. Bounded integers are
/// mapped without the implementation-defined std distributions:
///
///   r = hi - lo + 1;  t = 2^64 mod r
///   repeat x = next() until x >= t;  return lo + (x mod r)
///
/// so a port in any language that has MT19937-64 reproduces the stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in the closed range [lo, hi]; requires lo <= hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit span
        const std::uint64_t threshold = (0 - range) % range;
        std::uint64_t x;
        do {
            x = next();
        } while (x < threshold);
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace mathforge
