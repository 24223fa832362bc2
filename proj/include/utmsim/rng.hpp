#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace utmsim {

// Deterministic random stream. All draws are hand-derived from mt19937_64
// output so that a (seed, label) pair produces the same sequence on every
// platform; the standard distribution adaptors are implementation-defined
// and would break the byte-identical-log contract.
class RngStream {
public:
    // Substream seed = splitmix64(seed ^ fnv1a64(label)). Fixed labels keep
    // the launch/landing/shadowing realizations independent of each other.
    RngStream(std::uint64_t seed, std::string_view label)
        : engine_(splitmix64(seed ^ fnv1a64(label))) {}

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Index drawn from unnormalized weights (validated to sum to ~1 upstream).
    // A tail shortfall from rounding falls back to the last index.
    int categorical(std::span<const double> weights) {
        const double u = next_double();
        double cum = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            cum += weights[i];
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    // Inclusive range draw.
    int uniform_int(int lo, int hi) {
        const int n = hi - lo + 1;
        int k = static_cast<int>(next_double() * n);
        if (k >= n) k = n - 1;
        return lo + k;
    }

    // Box-Muller; one engine draw pair per call.
    double gaussian(double mean, double stddev) {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

private:
    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace utmsim
