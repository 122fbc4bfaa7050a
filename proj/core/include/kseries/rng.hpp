#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace kseries {

/// Deterministic random stream. Each simulation replication (and each
/// permutation replicate) owns one, keyed by (seed, stream index), so results
/// do not depend on scheduling or on how many streams exist.
///
/// The generator is xoshiro-style splitmix64 chaining; transforms (Box-Muller,
/// Marsaglia-Tsang) are implemented here rather than via <random>
/// distributions so draws are bit-stable across standard libraries.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
        state_ = mix(state_ ^ (stream * 0xbf58476d1ce4e5b9ULL));
        // warm up
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1], for logs.
    double uniform01_open0() { return 1.0 - uniform01(); }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (cosine branch only; no cached state).
    double normal01() {
        double u1 = uniform01_open0();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal01();
    }

    double exponential(double rate) {
        return -std::log(uniform01_open0()) / rate;
    }

    /// Gamma(shape, scale=1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = uniform01_open0();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal01();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform01_open0();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
                return d * v;
        }
    }

    double beta(double alpha, double beta_param) {
        double x = gamma(alpha);
        double y = gamma(beta_param);
        return x / (x + y);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace kseries
