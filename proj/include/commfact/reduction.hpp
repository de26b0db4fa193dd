#pragma once

// Unitary reduction of a trace-zero matrix to one with zero diagonal.
//
// Each step works on a coordinate pair (i, j). The diagonal entry a_ii of
// Q^* A Q for the 2x2 unitary with first column v = (cos t, e^{i phi} sin t)
// is v^* A_ij v, which sweeps the numerical range of the 2x2 block; that range
// contains the segment [a_ii, a_jj]. A first pass zeroes the real parts of the
// diagonal one index at a time (pairing positive with negative entries), a
// second pass does the same for the imaginary parts with phi chosen so the
// real parts stay zero. Each index is fixed once, so a pass takes at most
// m - 1 rotations; passes are repeated only to mop up rounding.

#include <cstddef>

#include "commfact/matrix_core.hpp"

namespace commfact {

inline constexpr double kDefaultReductionTol = 1e-10;
inline constexpr std::size_t kMaxReductionSweeps = 40;

struct DiagonalizationResult {
    /// Unitary with reduced = Q^* A Q.
    ComplexMatrix q;
    ComplexMatrix reduced;
    /// max_i |reduced(i, i)|
    double diag_residual = 0;
    /// diag_residual <= tol * max(1, ||A||_2)
    bool converged = false;
    std::size_t sweeps = 0;
    std::size_t rotations = 0;
};

/// Throws TraceError if |tr A| > 1e-10 max(1, ||A||_2), DimensionError if A is
/// not square. Non-convergence within kMaxReductionSweeps is reported through
/// `converged`, not thrown.
DiagonalizationResult zero_diagonal_reduce(const ComplexMatrix& a,
                                           double tol = kDefaultReductionTol);

/// Q M Q^*. Throws PreconditionError unless ||Q^* Q - I||_2 <= 1e-10 max(1, m).
ComplexMatrix apply_conjugation(const ComplexMatrix& q, const ComplexMatrix& m);

/// Trace-zero test shared by the reduction and the factorizer.
bool is_trace_zero(const ComplexMatrix& a, double rel_tol = 1e-10);

} // namespace commfact
