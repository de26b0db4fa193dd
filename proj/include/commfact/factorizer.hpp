#pragma once

// Commutator factorization A = [B, C] with B normal.
//
// After reducing A to zero diagonal (reduced = Q^* A Q), take B = diag(b) for
// a permutation b of the Gaussian lattice points; then [diag(b), C] equals
// the reduced matrix iff c_ij = a_ij / (b_i - b_j) off the diagonal. The
// diagonal of C is free and set to zero. Several random permutations are
// tried and the one with the smallest ||C||_2 is kept. The results are
// translated back as B = Q diag(b) Q^*, C = Q C~ Q^*.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "commfact/lattice.hpp"
#include "commfact/matrix_core.hpp"

namespace commfact {

/// Calibrated constant c in ratio <= sqrt(c + log m). Over the acceptance
/// sweeps ratio^2 - log m stays below about 0.5 (its maximum is at m = 2
/// and m = 3); 2 leaves room for unlucky seeds.
inline constexpr double kCalibratedC = 2.0;

inline constexpr std::size_t kDefaultTrials = 32;
inline constexpr double kDefaultFactorTol = 1e-10;

struct FactorOptions {
    std::size_t trials = kDefaultTrials;
    std::uint64_t seed = 0;
    /// Post-process the best permutation with local_swap_improve.
    bool optimize_assignment = false;
    std::size_t max_swap_passes = 16;
    double tol = kDefaultFactorTol;
};

struct FactorizationCertificate {
    ComplexMatrix b;
    ComplexMatrix c;
    ComplexMatrix q;
    /// Diagonal of Q^* B Q, i.e. the permuted lattice points.
    std::vector<Complex> assignment;

    std::size_t m = 0;
    /// ||A - [B, C]||_2
    double residual = 0;
    double op_norm_b = 0;
    double hs_norm_c = 0;
    double hs_norm_a = 0;
    /// op_norm_b * hs_norm_c / hs_norm_a (0 when A = 0)
    double ratio = 0;
    /// sqrt(kCalibratedC + log m)
    double bound = 0;
    double diag_residual = 0;
    double normality_defect = 0;

    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t best_trial = 0;
    bool optimized_assignment = false;
    std::string prng;
    bool valid = false;

    double ratio_sq_minus_log_m() const;
};

/// Entrywise C for B = diag(b): a_ij / (b_i - b_j) off the diagonal, zero on
/// it. Throws PreconditionError if reduced has a diagonal entry above
/// tol * max(1, ||reduced||_2) or if two b_i coincide.
ComplexMatrix c_from_b(const ComplexMatrix& reduced, std::span<const Complex> b,
                       double tol = kDefaultFactorTol);

/// sum_{i != j} |a_ij|^2 / |b_i - b_j|^2, i.e. ||C||_2^2 for that assignment.
double assignment_objective(const ComplexMatrix& reduced, std::span<const Complex> b);

/// Best-of-trials factorization. Throws TraceError for a non trace-zero A and
/// DimensionError for a non-square one; a failed reduction or a failed
/// self-check yields a certificate with valid == false.
FactorizationCertificate factor(const ComplexMatrix& a, const FactorOptions& options = {});

/// Exact mean of ||C||_2^2 over all m! assignments of the points to the
/// diagonal. Enumerates permutations, so m is capped at 8.
double mean_c2_over_permutations(const ComplexMatrix& reduced, std::span<const Complex> points);

/// Pairwise swaps that strictly lower assignment_objective, repeated for up
/// to max_passes passes over all pairs or until a pass changes nothing.
std::vector<Complex> local_swap_improve(const ComplexMatrix& reduced, std::vector<Complex> b,
                                        std::size_t max_passes);

} // namespace commfact
