#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace asianpde {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the k-th output is mix64(key + (k + 1) * gamma).
///
/// Streams are split by hashing (seed, stream index) into the key, so path
/// i of a run depends only on (seed, i) and never on thread scheduling.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit constexpr SplitMix64(std::uint64_t key) : state_(key) {}

    static constexpr SplitMix64 for_stream(std::uint64_t seed, std::uint64_t stream) {
        return SplitMix64(mix64(seed ^ mix64(stream ^ 0xd1b54a32d192ed03ULL)));
    }

    constexpr std::uint64_t operator()() {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    constexpr double uniform() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Standard normals via the trigonometric Box-Muller transform of two
/// open-interval uniforms; the second variate of each pair is cached.
class NormalStream {
public:
    explicit NormalStream(SplitMix64 source) : source_(source) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = source_.uniform();
        const double u2 = source_.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 source_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace asianpde
