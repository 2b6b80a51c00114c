// Counter-based random streams: every shot owns a stream derived from
// (seed, shot index) alone, so results never depend on how shots are
// partitioned across workers.

#pragma once

#include <cmath>
#include <cstdint>

namespace qpath {

namespace detail {

// splitmix64 finalizer (Vigna, public domain).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

class ShotRng {
  public:
    ShotRng(std::uint64_t seed, std::uint64_t shot)
        : state_(detail::mix64(detail::mix64(seed + 0x9E3779B97F4A7C15ULL) ^
                               detail::mix64(shot ^ 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::mix64(state_);
    }

    // Uniform in [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log argument.
    double next_open_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes two draws.
    double next_normal() {
        const double u1 = next_open_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace qpath
