#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cpldpc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive an independent stream seed from a base seed and counters.
/// Used for per-trial seeding so concurrent execution order cannot
/// change results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = base;
    std::uint64_t x = splitmix64(s);
    s ^= a * 0xd1342543de82ef95ull;
    x ^= splitmix64(s);
    s ^= b * 0xaf251af3b0f025b5ull;
    return x ^ splitmix64(s);
}

/// mt19937_64 wrapper with hand-rolled draw helpers. The standard
/// distributions are implementation-defined, so all sampling goes
/// through these to keep outputs identical across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    /// Uniform in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x;
        do {
            x = u64();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real() < p; }

    bool bit() { return (u64() >> 63) != 0; }

    /// Standard normal via Box-Muller (two fresh uniforms per draw).
    double gauss() {
        const double u1 = 1.0 - real();  // (0, 1]
        const double u2 = real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace cpldpc
