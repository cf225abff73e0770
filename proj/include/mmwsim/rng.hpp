#pragma once

// Deterministic random number generation.
//
// Everything in the simulator that consumes randomness goes through this
// header so that a (base_seed, run_index) pair reproduces a run bit for bit
// on any platform.  std::normal_distribution and friends are deliberately
// avoided: their output is implementation defined and differs across
// standard libraries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mmwsim {

/// One step of the splitmix64 sequence.  Advances `state` and returns the
/// next output.  Used both as a seeding helper and as the stated mix
/// function for deriving per-run seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Combine two 64-bit values into one seed.
///
/// Per-run seeds are derived as mix_seed(base_seed, run_index).  The run
/// index is deliberately the only varying input: runs that share a run
/// index see identical shadow fading, subpath angles and noise draws across
/// every sweep point and scheme, which turns sweep comparisons into paired
/// statistics (common random numbers).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s = h ^ (b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    return splitmix64(s);
}

/// xoshiro256++ engine (Blackman/Vigna), seeded via splitmix64.
class Xoshiro256pp {
  public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed = 1) {
        for (auto& word : state_) word = splitmix64(seed);
    }

    std::uint64_t operator()() { return next(); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Box-Muller transform.  The pair is computed
    /// explicitly (no library distribution) so sequences are portable; the
    /// second value is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // (0, 1] keeps the logarithm finite.
        const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal CN(0, 1): unit total power split
    /// evenly between the real and imaginary parts.
    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ull; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// One standard normal computed from a throwaway seed, independent of any
/// engine state.  Used for order-independent lookups such as the shadow
/// fading field.
inline double gaussian_at(std::uint64_t seed) {
    std::uint64_t s = seed;
    const std::uint64_t w1 = splitmix64(s);
    const std::uint64_t w2 = splitmix64(s);
    const double u1 = static_cast<double>((w1 >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(w2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace mmwsim
