#pragma once

// Gaussian-integer point sets and their inverse-square pair energy.
//
// For a configuration z_1..z_m the pair energy is
//     E(z) = sum_{i != j} 1 / |z_i - z_j|^2        (ordered pairs),
// and E(z) / (m (m-1)) is the expectation of 1/|b_1 - b_2|^2 for two distinct
// entries of a uniformly random assignment of the points.

#include <cstdint>
#include <span>
#include <vector>

#include "commfact/matrix_core.hpp"

namespace commfact {

/// Calibrated constant a1 in E/(m(m-1)) <= (a1 + pi log m) / m. The measured
/// m E/(m(m-1)) - pi log m peaks at m = 2 (about -0.18) and decreases, so zero
/// is a valid choice; see EnergyReport::empirical_a1 for the per-m value.
inline constexpr double kCalibratedA1 = 0.0;

struct LatticePointSet {
    /// Sorted by (|z|^2, Re z, Im z).
    std::vector<Complex> points;
    /// 1 + sqrt(m / pi)
    double radius_bound = 0;

    std::size_t size() const { return points.size(); }
};

/// The m Gaussian integers of smallest modulus, ties broken by real part then
/// imaginary part (ascending).
LatticePointSet gaussian_points(std::size_t m);

/// 1 + sqrt(m / pi)
double disc_radius(std::size_t m);

/// sum_{i != j} 1/|z_i - z_j|^2. Infinite if two points coincide.
double pair_energy(std::span<const Complex> points);

struct EnergyReport {
    std::size_t m = 0;
    double pair_energy = 0;
    /// pair_energy / (m (m-1))
    double expectation = 0;
    /// (kCalibratedA1 + pi log m) / m
    double bound_value = 0;
    /// m * expectation - pi log m
    double empirical_a1 = 0;
};

/// Throws PreconditionError for fewer than two points.
EnergyReport pair_expectation(std::span<const Complex> points);
inline EnergyReport pair_expectation(const LatticePointSet& ps) { return pair_expectation(ps.points); }

struct OptimizedConfiguration {
    std::vector<Complex> points;
    double energy = 0;
    /// Energy of gaussian_points(m), where the search starts.
    double initial_energy = 0;
    std::size_t accepted_moves = 0;

    double relative_improvement() const {
        return initial_energy > 0 ? (initial_energy - energy) / initial_energy : 0.0;
    }
};

/// Descent from gaussian_points(m): move one random point by a Gaussian step
/// whose scale shrinks linearly to zero, project into the disc of radius
/// disc_radius(m), keep the move iff the energy drops.
OptimizedConfiguration optimize_configuration(std::size_t m, std::size_t iterations,
                                              std::uint64_t seed);

struct LeadingTermFit {
    /// Coefficient of m log m.
    double slope = 0;
    /// Coefficient of m.
    double intercept = 0;
    std::vector<std::size_t> sizes;
};

/// Least-squares fit pair_energy(gaussian_points(m)) ~ slope * m log m +
/// intercept * m, i.e. a line through (log m, pair_energy / m). Duplicates are
/// collapsed; needs at least three sizes with max >= 10 * min.
LeadingTermFit leading_term_fit(std::vector<std::size_t> sizes);

} // namespace commfact
