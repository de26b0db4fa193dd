#pragma once

// Checks for the extremal trace-zero matrix A = P - I/m (P the projection on
// the first coordinate). For any factorization A = [B, C], normalized so that
// ||B|| = 1, and the filtration built from (B, C, span{e_1}):
//
//   1 - (1/m) sum_{k<=n} rank P_k  <=  ||P_{n+1} C P_n||_1 + ||P_n C P_{n+1}||_1
//   the same right side            >=  1 - (1/m) binom(n+2, 2)
//   sum_{i<=l} s_i(C)              >=  sqrt(l) / 6                  for l <= m
//   sum_{i<=(k+1)(k+2)/2} s_i(C)   >=  (k+1) / 4     when (k+1)(k+2) <= m
//
// plus the partial isometries V, W with P_n V C P_n = |P_{n+1} C P_n| and
// P_n W C^* P_n = |P_{n+1} C^* P_n|.

#include <cstddef>
#include <optional>
#include <vector>

#include "commfact/factorizer.hpp"
#include "commfact/filtration.hpp"
#include "commfact/matrix_core.hpp"

namespace commfact {

/// Window K in ratio^2 >= (log m - K) / 4.
inline constexpr double kDefaultLowerWindow = 10.0;
inline constexpr double kTraceSlackTol = 1e-8;
inline constexpr double kPartialSumTol = 1e-9;
inline constexpr double kIsometryTol = 1e-9;

/// diag(1 - 1/m, -1/m, ..., -1/m). Throws PreconditionError for m < 2.
ComplexMatrix extremal_matrix(std::size_t m);

struct NormalizedPair {
    ComplexMatrix b;
    ComplexMatrix c;
    /// The ||B|| that was divided out of B and multiplied into C.
    double normalization = 1;
};

/// (B, C) -> (B / ||B||, C ||B||); the commutator is unchanged.
NormalizedPair normalize_pair(const ComplexMatrix& b, const ComplexMatrix& c);

struct TraceRecord {
    std::size_t n = 0;
    /// 1 - (1/m) sum_{k<=n} dims[k]
    double lhs = 0;
    /// ||P_{n+1} C P_n||_1 + ||P_n C P_{n+1}||_1
    double rhs = 0;
    double slack = 0;
    bool pass = false;
    /// 1 - (1/m) binom(n+2, 2)
    double normbd_bound = 0;
    bool normbd_pass = false;
};

/// One record per block n. For the last block P_{n+1} = 0, so its record
/// passes only if the filtration exhausts the space. Throws PreconditionError
/// unless ||B|| = 1 to 1e-10 and [B, C] = extremal_matrix(m) to
/// 1e-9 max(1, ||C||_2).
std::vector<TraceRecord> verify_trace_inequality(const ComplexMatrix& b, const ComplexMatrix& c,
                                                 const Filtration& f,
                                                 double tol = kTraceSlackTol);

/// sum over n with binom(n+2, 2) < m of (1 - binom(n+2, 2)/m)^2 / (2(n+1)).
double quarter_log_sum(std::size_t m);

struct PartialIsometries {
    ComplexMatrix v;
    ComplexMatrix w;
    /// max_n ||P_n V C P_n - |P_{n+1} C P_n|||_2
    double v_identity_residual = 0;
    /// max_n ||P_n W C^* P_n - |P_{n+1} C^* P_n|||_2
    double w_identity_residual = 0;
    double v_norm = 0;
    double w_norm = 0;
};

/// Assembled from per-block polar decompositions of P_{n+1} C P_n and
/// P_{n+1} C^* P_n. Throws NumericalError if a block SVD fails.
PartialIsometries construct_partial_isometries(const ComplexMatrix& c, const Filtration& f);

struct PartialSumRecord {
    std::size_t l = 0;
    double partial_sum = 0;
    double bound = 0;
    bool pass = false;
};

struct TriangularRecord {
    std::size_t k = 0;
    /// (k+1)(k+2)/2
    std::size_t l = 0;
    double partial_sum = 0;
    /// (k+1)/4
    double bound = 0;
    bool pass = false;
};

struct PartialSumReport {
    SingularProfile profile;
    std::vector<PartialSumRecord> records;
    std::vector<TriangularRecord> triangular;
    bool pass() const;
};

PartialSumReport verify_partial_sums(const ComplexMatrix& c, double tol = kPartialSumTol);

struct HsLowerBoundRecord {
    std::size_t m = 0;
    std::uint64_t seed = 0;
    double ratio = 0;
    double log_m = 0;
    /// log m - 4 ratio^2: the smallest K with ratio^2 >= (log m - K)/4
    double implied_k = 0;
    /// 4 ratio^2 - log m: largest c' with ratio^2 >= (c' + log m)/4
    double implied_c_prime = 0;
    /// log m - ratio^2: the O(1) in ratio^2 >= log m - O(1)
    double implied_log_offset = 0;
    bool pass = false;
};

struct HsLowerBoundReport {
    double window = kDefaultLowerWindow;
    std::vector<HsLowerBoundRecord> records;
    double max_implied_k = 0;
    bool pass() const;
};

/// Each certificate must factor extremal_matrix(cert.m) with residual
/// <= 1e-9 max(1, ||B|| ||C||_2); otherwise PreconditionError.
HsLowerBoundReport verify_hs_lower_bound(const std::vector<FactorizationCertificate>& certificates,
                                         double window = kDefaultLowerWindow);

struct IsometryCheck {
    double v_identity_residual = 0;
    double w_identity_residual = 0;
    double v_norm = 0;
    double w_norm = 0;
    /// Tr(P_n (VC + WC^*) P_n) >= 1 - (1/m) sum_{k<=n} rank P_k - tol, all n
    bool trace_pass = false;
    bool pass = false;
};

struct LowerBoundReport {
    std::size_t m = 0;
    double normalization = 1;
    double residual = 0;
    double ratio = 0;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    Filtration filtration;
    LemmaReport lemma;
    std::vector<TraceRecord> trace_records;
    IsometryCheck isometries;
    PartialSumReport partial_sums;
    double quarter_log_sum = 0;
    HsLowerBoundReport hs_lower;

    bool trace_pass() const;
    bool normbd_pass() const;
    /// All constant-free inequalities plus the filtration conclusions.
    bool strict_pass() const;
};

/// Runs every check on a factorization (B, C) of extremal_matrix(m).
LowerBoundReport analyze_extremal_factorization(const FactorizationCertificate& cert,
                                                std::optional<double> rank_tol = std::nullopt,
                                                double window = kDefaultLowerWindow);

/// Factors extremal_matrix(m) and analyzes the result.
LowerBoundReport run_lower_bound(std::size_t m, const FactorOptions& options = {},
                                 std::optional<double> rank_tol = std::nullopt,
                                 double window = kDefaultLowerWindow);

} // namespace commfact
