#pragma once

// Seeded randomness with a bit-reproducible contract. Only the raw
// mt19937_64 stream is taken from the standard library; the distributions
// are implemented here because the std:: ones are implementation-defined.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "commfact/matrix_core.hpp"

namespace commfact {

using Prng = std::mt19937_64;

/// Recorded in certificates so results can be tied to the generator version.
inline constexpr std::string_view kPrngName = "mt19937_64/fisher-yates/box-muller/v1";

/// Uniform integer in [0, n) by rejection; n must be positive.
std::uint64_t uniform_below(Prng& rng, std::uint64_t n);

/// Uniform double in (0, 1).
double uniform_open(Prng& rng);

double standard_normal(Prng& rng);

/// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t n, Prng& rng);

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0,1)).
ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Prng& rng);

/// Ginibre matrix with trace/m subtracted from the diagonal.
ComplexMatrix random_trace_zero(Eigen::Index m, std::uint64_t seed);

/// Ginibre matrix with its diagonal set to zero.
ComplexMatrix random_zero_diagonal(Eigen::Index m, Prng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(Eigen::Index m, Prng& rng);

} // namespace commfact
