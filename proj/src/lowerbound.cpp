#include "commfact/lowerbound.hpp"

#include <algorithm>
#include <cmath>

namespace commfact {

namespace {

double binom2(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

// |X| through a Jacobi SVD, independent of the BDCSVD used for construction.
ComplexMatrix modulus_jacobi(const ComplexMatrix& x) {
    if (x.size() == 0)
        return ComplexMatrix::Zero(x.cols(), x.cols());
    Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeThinV);
    const auto& v = svd.matrixV();
    return v * svd.singularValues().asDiagonal() * v.adjoint();
}

} // namespace

ComplexMatrix extremal_matrix(std::size_t m) {
    if (m < 2)
        throw PreconditionError("extremal_matrix: m must be at least 2");
    const double tail = -1.0 / static_cast<double>(m);
    ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 1; i < a.rows(); ++i)
        a(i, i) = tail;
    // (m-1) * tail is exact in extended precision; round once.
    a(0, 0) = static_cast<double>(-static_cast<long double>(m - 1) * static_cast<long double>(tail));
    return a;
}

NormalizedPair normalize_pair(const ComplexMatrix& b, const ComplexMatrix& c) {
    const double norm = operator_norm(b);
    if (!(norm > 0))
        throw PreconditionError("normalize_pair: B is zero");
    return {b / norm, c * norm, norm};
}

std::vector<TraceRecord> verify_trace_inequality(const ComplexMatrix& b, const ComplexMatrix& c,
                                                 const Filtration& f, double tol) {
    detail::require_square(b, "verify_trace_inequality");
    const auto m = static_cast<std::size_t>(b.rows());
    if (c.rows() != b.rows() || c.cols() != b.cols() || f.blocks.empty() ||
        f.blocks.front().rows() != b.rows())
        throw DimensionError("verify_trace_inequality: inputs do not match");
    if (std::abs(operator_norm(b) - 1.0) > 1e-10)
        throw PreconditionError("verify_trace_inequality: B must be normalized to ||B|| = 1");
    const double residual = (commutator(b, c) - extremal_matrix(m)).norm();
    if (residual > 1e-9 * std::max(1.0, hs_norm(c)))
        throw PreconditionError("verify_trace_inequality: [B, C] is not the extremal matrix");

    std::vector<TraceRecord> records;
    double cumulative = 0;
    const std::size_t blocks = f.blocks.size();
    for (std::size_t n = 0; n < blocks; ++n) {
        TraceRecord r;
        r.n = n;
        cumulative += static_cast<double>(f.dims[n]);
        r.lhs = 1.0 - cumulative / static_cast<double>(m);
        if (n + 1 < blocks) {
            const auto& hn = f.blocks[n];
            const auto& hnext = f.blocks[n + 1];
            const ComplexMatrix down = hnext.adjoint() * c * hn;
            const ComplexMatrix up = hn.adjoint() * c * hnext;
            r.rhs = singular_values(down).sum() + singular_values(up).sum();
        }
        r.slack = r.rhs - r.lhs;
        r.pass = r.rhs >= r.lhs - tol;
        r.normbd_bound = 1.0 - binom2(n + 2) / static_cast<double>(m);
        r.normbd_pass = r.rhs >= r.normbd_bound - tol;
        records.push_back(r);
    }
    return records;
}

double quarter_log_sum(std::size_t m) {
    if (m < 2)
        throw PreconditionError("quarter_log_sum: m must be at least 2");
    const double inv_m = 1.0 / static_cast<double>(m);
    double sum = 0;
    // t runs over binom(n+2, 2) = 1, 3, 6, ...
    std::size_t t = 1;
    for (std::size_t n = 0; t < m; ++n, t += n + 1) {
        const double gap = 1.0 - static_cast<double>(t) * inv_m;
        sum += gap * gap / (2.0 * static_cast<double>(n + 1));
    }
    return sum;
}

PartialIsometries construct_partial_isometries(const ComplexMatrix& c, const Filtration& f) {
    detail::require_square(c, "construct_partial_isometries");
    if (f.blocks.empty() || f.blocks.front().rows() != c.rows())
        throw DimensionError("construct_partial_isometries: filtration does not match C");
    const Eigen::Index m = c.rows();
    const ComplexMatrix c_adj = c.adjoint();

    PartialIsometries out{ComplexMatrix::Zero(m, m), ComplexMatrix::Zero(m, m)};
    const std::size_t blocks = f.blocks.size();
    // U_n maps H_n into H_{n+1}; V collects the adjoints, so the pieces have
    // disjoint initial and final spaces.
    for (std::size_t n = 0; n + 1 < blocks; ++n) {
        const auto& hn = f.blocks[n];
        const auto& hnext = f.blocks[n + 1];
        const auto down = polar_decompose((hnext.adjoint() * c * hn).eval());
        const auto down_adj = polar_decompose((hnext.adjoint() * c_adj * hn).eval());
        out.v.noalias() += hn * down.isometry.adjoint() * hnext.adjoint();
        out.w.noalias() += hn * down_adj.isometry.adjoint() * hnext.adjoint();
    }

    const ComplexMatrix vc = out.v * c;
    const ComplexMatrix wc = out.w * c_adj;
    for (std::size_t n = 0; n < blocks; ++n) {
        const auto& hn = f.blocks[n];
        ComplexMatrix target_v = ComplexMatrix::Zero(hn.cols(), hn.cols());
        ComplexMatrix target_w = target_v;
        if (n + 1 < blocks) {
            target_v = modulus_jacobi(f.blocks[n + 1].adjoint() * c * hn);
            target_w = modulus_jacobi(f.blocks[n + 1].adjoint() * c_adj * hn);
        }
        out.v_identity_residual =
            std::max(out.v_identity_residual, (hn.adjoint() * vc * hn - target_v).norm());
        out.w_identity_residual =
            std::max(out.w_identity_residual, (hn.adjoint() * wc * hn - target_w).norm());
    }
    out.v_norm = m ? singular_values(out.v)(0) : 0.0;
    out.w_norm = m ? singular_values(out.w)(0) : 0.0;
    return out;
}

bool PartialSumReport::pass() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; }) &&
           std::all_of(triangular.begin(), triangular.end(), [](const auto& r) { return r.pass; });
}

PartialSumReport verify_partial_sums(const ComplexMatrix& c, double tol) {
    PartialSumReport report;
    report.profile = singular_profile(c);
    const auto m = static_cast<std::size_t>(c.rows());
    for (std::size_t l = 1; l <= m; ++l) {
        PartialSumRecord r;
        r.l = l;
        r.partial_sum = report.profile.sum_of_largest(static_cast<Eigen::Index>(l));
        r.bound = std::sqrt(static_cast<double>(l)) / 6.0;
        r.pass = r.partial_sum >= r.bound - tol;
        report.records.push_back(r);
    }
    for (std::size_t k = 0; (k + 1) * (k + 2) <= m; ++k) {
        TriangularRecord r;
        r.k = k;
        r.l = (k + 1) * (k + 2) / 2;
        r.partial_sum = report.profile.sum_of_largest(static_cast<Eigen::Index>(r.l));
        r.bound = static_cast<double>(k + 1) / 4.0;
        r.pass = r.partial_sum >= r.bound - tol;
        report.triangular.push_back(r);
    }
    return report;
}

bool HsLowerBoundReport::pass() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

HsLowerBoundReport verify_hs_lower_bound(const std::vector<FactorizationCertificate>& certificates,
                                         double window) {
    HsLowerBoundReport report;
    report.window = window;
    report.max_implied_k = -std::numeric_limits<double>::infinity();
    for (const auto& cert : certificates) {
        const ComplexMatrix a = extremal_matrix(cert.m);
        if (cert.b.rows() != a.rows() || cert.c.rows() != a.rows())
            throw DimensionError("verify_hs_lower_bound: certificate has the wrong size");
        const double op_b = operator_norm(cert.b);
        const double hs_c = hs_norm(cert.c);
        const double residual = (a - commutator(cert.b, cert.c)).norm();
        if (residual > 1e-9 * std::max(1.0, op_b * hs_c))
            throw PreconditionError("verify_hs_lower_bound: certificate does not factor the "
                                    "extremal matrix");
        HsLowerBoundRecord r;
        r.m = cert.m;
        r.seed = cert.seed;
        r.ratio = op_b * hs_c / hs_norm(a);
        r.log_m = std::log(static_cast<double>(cert.m));
        const double r2 = r.ratio * r.ratio;
        r.implied_k = r.log_m - 4.0 * r2;
        r.implied_c_prime = 4.0 * r2 - r.log_m;
        r.implied_log_offset = r.log_m - r2;
        r.pass = r.implied_k <= window;
        report.max_implied_k = std::max(report.max_implied_k, r.implied_k);
        report.records.push_back(r);
    }
    return report;
}

bool LowerBoundReport::trace_pass() const {
    return std::all_of(trace_records.begin(), trace_records.end(), [](const auto& r) { return r.pass; });
}

bool LowerBoundReport::normbd_pass() const {
    return std::all_of(trace_records.begin(), trace_records.end(),
                       [](const auto& r) { return r.normbd_pass; });
}

bool LowerBoundReport::strict_pass() const {
    return lemma.pass() && trace_pass() && normbd_pass() && isometries.pass && partial_sums.pass();
}

LowerBoundReport analyze_extremal_factorization(const FactorizationCertificate& cert,
                                                std::optional<double> rank_tol, double window) {
    LowerBoundReport report;
    report.m = cert.m;
    report.seed = cert.seed;
    report.trials = cert.trials;
    report.residual = cert.residual;
    report.ratio = cert.ratio;

    const auto m = static_cast<Eigen::Index>(cert.m);
    const auto pair = normalize_pair(cert.b, cert.c);
    report.normalization = pair.normalization;

    const ComplexMatrix e1 = first_coordinate_basis(m);
    report.filtration = build_filtration(pair.b, pair.c, e1, rank_tol);
    report.lemma = verify_lemma_conclusions(report.filtration, pair.b, pair.c,
                                            Complex(1.0 / static_cast<double>(m), 0.0), e1);
    report.trace_records = verify_trace_inequality(pair.b, pair.c, report.filtration);

    const auto iso = construct_partial_isometries(pair.c, report.filtration);
    report.isometries.v_identity_residual = iso.v_identity_residual;
    report.isometries.w_identity_residual = iso.w_identity_residual;
    report.isometries.v_norm = iso.v_norm;
    report.isometries.w_norm = iso.w_norm;
    report.isometries.trace_pass = true;
    const ComplexMatrix combined = iso.v * pair.c + iso.w * pair.c.adjoint();
    for (std::size_t n = 0; n < report.filtration.blocks.size(); ++n) {
        const auto& h = report.filtration.blocks[n];
        const double trace = (h.adjoint() * combined * h).trace().real();
        if (trace < report.trace_records[n].lhs - kTraceSlackTol)
            report.isometries.trace_pass = false;
    }
    report.isometries.pass = iso.v_identity_residual <= kIsometryTol &&
                             iso.w_identity_residual <= kIsometryTol &&
                             iso.v_norm <= 1.0 + 1e-10 && iso.w_norm <= 1.0 + 1e-10 &&
                             report.isometries.trace_pass;

    report.partial_sums = verify_partial_sums(pair.c);
    report.quarter_log_sum = quarter_log_sum(cert.m);
    report.hs_lower = verify_hs_lower_bound({cert}, window);
    return report;
}

LowerBoundReport run_lower_bound(std::size_t m, const FactorOptions& options,
                                 std::optional<double> rank_tol, double window) {
    const auto cert = factor(extremal_matrix(m), options);
    if (!cert.valid)
        throw NumericalError("run_lower_bound: factorization of the extremal matrix is not valid");
    return analyze_extremal_factorization(cert, rank_tol, window);
}

} // namespace commfact
