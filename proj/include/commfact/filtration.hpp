#pragma once

// Subspace filtration generated by two operators S, T from a subspace M:
//
//   V_0 = M,  V_n = span{ S^k T^l M : k + l <= n },  H_n = V_n (-) V_{n-1}.
//
// V_n is assembled from generators that span the same space as the degree-n
// monomials but stay well conditioned:
//
//   V_n = V_{n-1} + S H_{n-1} + K_{n+1}(T, M),
//
// where K is the block Krylov space of T started at M. Monomials with a
// leading S are S applied to degree n-1 monomials, so they lie in
// V_{n-1} + S H_{n-1}; the pure powers T^n M only add the newest Krylov
// block, which an Arnoldi recurrence produces orthonormally.
//
// When ([S,T] + lambda I) maps into M the blocks make S and T block
// tridiagonal: P_i S P_j = P_i T P_j = 0 for i > j + 1.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "commfact/matrix_core.hpp"

namespace commfact {

/// 1e-8 * m
double default_rank_tolerance(Eigen::Index m);

struct Filtration {
    /// Orthonormal bases, blocks[n] spans H_n.
    std::vector<ComplexMatrix> blocks;
    std::vector<std::size_t> dims;
    std::size_t dim_m = 0;
    double rank_tolerance = 0;
    /// max over i > j + 1 of ||P_i S P_j||_2 and ||P_i T P_j||_2
    double block_residual = 0;
    /// ||(I - Pi) S Pi||_2 + ||(I - Pi) T Pi||_2, Pi the projection onto the sum
    double invariance_residual = 0;

    std::size_t total_dim() const;
    /// All blocks side by side.
    ComplexMatrix basis() const;
    /// Orthogonal projection onto H_n (zero if n is past the last block).
    ComplexMatrix projector(std::size_t n) const;
    /// Orthogonal projection onto V_n = H_0 + ... + H_n.
    ComplexMatrix cumulative_projector(std::size_t n) const;
};

/// A candidate direction is kept iff its component orthogonal to the current
/// span exceeds rank_tol times its norm. Building stops when a degree adds no
/// direction and the Krylov recurrence is exhausted, when the whole space is
/// covered, or after 2m degrees. Throws DimensionError on shape mismatch and
/// PreconditionError if m_basis does not have orthonormal columns.
Filtration build_filtration(const ComplexMatrix& s, const ComplexMatrix& t,
                            const ComplexMatrix& m_basis,
                            std::optional<double> rank_tol = std::nullopt);

/// Block residuals for a given set of blocks (recomputed, not cached).
double block_structure_residual(const std::vector<ComplexMatrix>& blocks, const ComplexMatrix& s,
                                const ComplexMatrix& t);
double invariance_residual(const std::vector<ComplexMatrix>& blocks, const ComplexMatrix& s,
                           const ComplexMatrix& t);

struct LemmaTolerances {
    /// hypothesis residual <= hypothesis * max(1, ||S||_2 ||T||_2)
    double hypothesis = 1e-8;
    /// block residual <= structure * (||S|| + ||T||)
    double structure = 1e-8;
    /// invariance residual <= invariance * max(1, ||S|| + ||T||)
    double invariance = 1e-8;
};

struct LemmaReport {
    /// ||(I - P_M)([S,T] + lambda I)||_2
    double hypothesis_residual = 0;
    double block_residual = 0;
    double invariance_residual = 0;
    double hypothesis_limit = 0;
    double structure_limit = 0;
    double invariance_limit = 0;
    bool hypothesis_pass = false;
    bool structure_pass = false;
    bool invariance_pass = false;
    /// dims[n] <= (n + 1) dim M for all n
    bool dims_pass = false;
    /// The structural conclusions only follow when the hypothesis holds;
    /// otherwise they are reported but flagged as not applicable.
    bool conclusions_applicable = false;

    bool pass() const {
        return hypothesis_pass && structure_pass && invariance_pass && dims_pass;
    }
};

LemmaReport verify_lemma_conclusions(const Filtration& f, const ComplexMatrix& s,
                                     const ComplexMatrix& t, Complex lambda,
                                     const ComplexMatrix& m_basis,
                                     const LemmaTolerances& tol = {});

/// First standard basis vector as an m x 1 matrix.
ComplexMatrix first_coordinate_basis(Eigen::Index m);

} // namespace commfact
