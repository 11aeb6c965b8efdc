#ifndef SGDOM_RNG_HPP
#define SGDOM_RNG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>

namespace sgdom {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, stream, index), so parallel consumers can generate the same
/// sequence regardless of scheduling, and sample k of a run with a
/// larger budget is identical to sample k of a smaller one.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    [[nodiscard]] double uniform(std::uint64_t index) const {
        return static_cast<double>(word(index) >> 11) * 0x1.0p-53;
    }

    /// Standard complex normal sample via Box-Muller on two lanes.
    [[nodiscard]] std::complex<double> cnormal(std::uint64_t index) const {
        const double u1 = uniform(2 * index);
        const double u2 = uniform(2 * index + 1);
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

    /// Unit-norm complex Gaussian direction in C^m. Sample k occupies a
    /// fixed index block of width 64, so directions for different k never
    /// overlap for any dimension up to 32.
    [[nodiscard]] Eigen::VectorXcd unit_direction(std::uint64_t k, int m) const {
        Eigen::VectorXcd x(m);
        for (int c = 0; c < m; ++c) {
            x(c) = cnormal(64 * k + static_cast<std::uint64_t>(c));
        }
        const double n = x.norm();
        if (n < 1e-30) {
            x.setZero();
            x(0) = 1.0;
            return x;
        }
        return x / n;
    }

private:
    [[nodiscard]] std::uint64_t word(std::uint64_t index) const {
        std::uint64_t h = mix(seed_ + 0x9E3779B97F4A7C15ull);
        h = mix(h ^ stream_);
        h = mix(h ^ index);
        return h;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace sgdom

#endif  // SGDOM_RNG_HPP
