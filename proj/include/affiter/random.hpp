#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace affiter {

/// Independent draws used by the generator. Each gets its own stream so that
/// changing how one is consumed never perturbs the others.
enum class RngStream : std::uint32_t { left_factor = 1, right_factor = 2, scaling = 3, sampling = 4 };

/// mt19937_64 seeded through std::seed_seq from (seed, stream). Both the engine
/// and seed_seq are fully specified by the standard, and the conversions below
/// avoid the implementation-defined std distributions, so streams are
/// identical across platforms.
class Rng {
public:
    Rng(std::uint64_t seed, RngStream stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream)};
        engine_.seed(seq);
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal by Box-Muller.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace affiter
