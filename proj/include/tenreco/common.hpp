#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tenreco {

/// Thrown when a bounded retry/search budget runs out (maps to CLI exit 4).
class resource_exhausted : public std::runtime_error {
  public:
    explicit resource_exhausted(const std::string& what)
        : std::runtime_error(what) {}
};

/// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable combination of two 64-bit values. Used for all derived seeds so
/// that results never depend on scheduling or platform.
inline std::uint64_t stable_hash(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

inline std::uint64_t stable_hash(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return stable_hash(stable_hash(a, b), c);
}

/// Minimal counter-based generator (splitmix64 stream). Deliberately not
/// std::mt19937 + std::..._distribution: those are implementation-defined,
/// and reproducibility of seeds across toolchains matters here.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return mix64(state_++); }

    /// Uniform on [0, 1); 53-bit resolution.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Standard exponential via inversion; strictly positive.
    double exponential() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u);
    }

  private:
    std::uint64_t state_;
};

} // namespace tenreco
