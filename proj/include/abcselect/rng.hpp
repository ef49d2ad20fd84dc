// rng.hpp — Counter-based random number streams (Philox4x32-10).
//
// Every stochastic component of the toolkit draws from an RngStream.  A
// stream is identified by (seed, stream id, counter); independent streams
// are derived by keying on labels or indices, never by sequential state
// hand-off.  This makes Monte Carlo runs reproducible and independent of
// worker scheduling: the stream for proposal i depends only on (seed, i).
//
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace abcselect {

/// 64-bit finalizer used to derive stream keys from labels and indices.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// FNV-1a hash of a label, finalized through mix64.
inline constexpr std::uint64_t hash_label(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return mix64(h);
}

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         std::array<std::uint32_t, 2>& key) noexcept {
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
}

/// One Philox4x32-10 block: 128-bit counter, 64-bit key, 128-bit output.
inline std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) noexcept {
    for (int r = 0; r < 10; ++r) philox_round(ctr, key);
    return ctr;
}

}  // namespace detail

/// A keyed, counter-based random stream.  Copyable; copies continue the
/// same sequence independently.  substream() derives a statistically
/// independent stream without consuming state from the parent.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

    /// Independent stream keyed by an integer salt.
    RngStream substream(std::uint64_t salt) const noexcept {
        return RngStream(seed_, mix64(stream_ ^ mix64(salt)));
    }
    /// Independent stream keyed by a label.
    RngStream substream(std::string_view label) const noexcept {
        return substream(hash_label(label));
    }
    RngStream substream(std::string_view label, std::uint64_t salt) const noexcept {
        return substream(hash_label(label)).substream(salt);
    }

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1); safe under log().
    double uniform_open() noexcept {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n); n >= 1.  Lemire's multiply-shift with rejection.
    std::uint64_t uniform_int(std::uint64_t n) noexcept {
        if (n <= 1) return 0;
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            if (static_cast<std::uint64_t>(m) >= threshold)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Standard normal via Box-Muller; pairs are cached per stream object.
    double normal() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

    double exponential(double rate = 1.0) noexcept { return -std::log(uniform_open()) / rate; }

    /// von Mises on [0, 2*pi) with location mu and concentration kappa >= 0.
    /// Best & Fisher (1979) wrapped-Cauchy envelope rejection.
    double vonmises(double mu, double kappa) noexcept {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        if (kappa < 1e-8) return wrap_angle(mu + two_pi * uniform());
        const double a = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
        const double b = (a - std::sqrt(2.0 * a)) / (2.0 * kappa);
        const double r = (1.0 + b * b) / (2.0 * b);
        double f;
        for (;;) {
            const double u1 = uniform_open();
            const double z = std::cos(std::numbers::pi * u1);
            f = (1.0 + r * z) / (r + z);
            const double c = kappa * (r - f);
            const double u2 = uniform_open();
            if (c * (2.0 - c) - u2 > 0.0) break;
            if (std::log(c / u2) + 1.0 - c >= 0.0) break;
        }
        const double u3 = uniform();
        const double theta = (u3 < 0.5) ? mu - std::acos(f) : mu + std::acos(f);
        return wrap_angle(theta);
    }

    /// Poisson draw.  Knuth's product method for small means; larger means
    /// split by additivity so the product never underflows.
    std::uint64_t poisson(double lambda) noexcept {
        if (lambda <= 0.0) return 0;
        std::uint64_t total = 0;
        while (lambda > 60.0) {
            total += poisson_knuth(30.0);
            lambda -= 30.0;
        }
        return total + poisson_knuth(lambda);
    }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }
    result_type operator()() noexcept { return next_u64(); }

private:
    static double wrap_angle(double t) noexcept {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        t = std::fmod(t, two_pi);
        return t < 0.0 ? t + two_pi : t;
    }

    std::uint64_t poisson_knuth(double lambda) noexcept {
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform_open();
        } while (p > limit);
        return k - 1;
    }

    void refill() noexcept {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        buf_ = detail::philox10(ctr, key);
        ++counter_;
        pos_ = 0;
    }

    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace abcselect
