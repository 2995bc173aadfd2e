#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bellmax {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic per-trial random stream.  The engine is seeded from
/// (seed, trial), so trials can run in parallel and still reproduce
/// bit-identically.  Uniform doubles come straight from engine output; the
/// standard library distributions are implementation-defined and not used.
class TrialRng {
  public:
    explicit TrialRng(std::uint64_t seed) : eng_(seed) {}

    static TrialRng stream(std::uint64_t seed, std::uint64_t trial) {
        return TrialRng(detail::splitmix64(detail::splitmix64(seed) ^
                                           (trial + 0x517cc1b727220a95ull)));
    }

    /// Uniform in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    bool chance(double prob) { return uniform01() < prob; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace bellmax
