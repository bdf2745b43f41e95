#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Core>

namespace melm {

using Rng = std::mt19937_64;

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Mix a master seed and a stream id into an independent engine seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return detail::splitmix64(detail::splitmix64(master) ^ detail::splitmix64(~stream));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Engine for substream `stream` of `master`. Streams with distinct ids are
/// statistically independent, so adding particles never perturbs existing ones.
inline Rng substream(std::uint64_t master, std::uint64_t stream) {
    return Rng(derive_seed(master, stream));
}

/// Uniform draw in [lo, hi). Hand-rolled from raw engine output so sequences
/// are identical across standard libraries.
template <typename Scalar = double>
Scalar uniform(Rng& rng, Scalar lo, Scalar hi) {
    const auto u = static_cast<Scalar>((rng() >> 11) * 0x1.0p-53);
    return lo + u * (hi - lo);
}

/// Standard Box-Muller, no caching of the second deviate.
template <typename Scalar = double>
Scalar gaussian(Rng& rng, Scalar mean = 0, Scalar sd = 1) {
    const Scalar u1 = Scalar(1) - uniform<Scalar>(rng, 0, 1);  // (0, 1]
    const Scalar u2 = uniform<Scalar>(rng, 0, 1);
    const Scalar r = std::sqrt(Scalar(-2) * std::log(u1));
    return mean + sd * r * std::cos(Scalar(2) * std::numbers::pi_v<Scalar> * u2);
}

/// Vector of independent uniform draws in [lo, hi).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> uniform_vector(Rng& rng, Eigen::Index n, Scalar lo,
                                                        Scalar hi) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform<Scalar>(rng, lo, hi);
    return v;
}

/// Unbiased draw from [0, bound) by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace melm
