#include "commfact/filtration.hpp"

#include <algorithm>
#include <cmath>

namespace commfact {

namespace {

// Columns [0, count) of `basis` are orthonormal. Appends the part of v
// orthogonal to them (two Gram-Schmidt passes) if it is large enough.
bool try_append(ComplexMatrix& basis, Eigen::Index& count, const ComplexVector& v, double rank_tol) {
    const double norm = v.norm();
    if (norm == 0.0 || count == basis.cols())
        return false;
    ComplexVector w = v;
    for (int pass = 0; pass < 2; ++pass) {
        if (count == 0)
            break;
        const ComplexVector coeffs = basis.leftCols(count).adjoint() * w;
        w.noalias() -= basis.leftCols(count) * coeffs;
    }
    const double rest = w.norm();
    if (!(rest > rank_tol * norm))
        return false;
    basis.col(count++) = w / rest;
    return true;
}

void require_orthonormal(const ComplexMatrix& m_basis) {
    const Eigen::Index k = m_basis.cols();
    const double defect = (m_basis.adjoint() * m_basis - ComplexMatrix::Identity(k, k)).norm();
    if (defect > 1e-10 * std::max<double>(1.0, static_cast<double>(k)))
        throw PreconditionError("build_filtration: basis of M is not orthonormal");
}

} // namespace

double default_rank_tolerance(Eigen::Index m) { return 1e-8 * static_cast<double>(m); }

std::size_t Filtration::total_dim() const {
    std::size_t total = 0;
    for (auto d : dims)
        total += d;
    return total;
}

ComplexMatrix Filtration::basis() const {
    const Eigen::Index rows = blocks.empty() ? 0 : blocks.front().rows();
    ComplexMatrix out(rows, static_cast<Eigen::Index>(total_dim()));
    Eigen::Index col = 0;
    for (const auto& b : blocks) {
        out.middleCols(col, b.cols()) = b;
        col += b.cols();
    }
    return out;
}

ComplexMatrix Filtration::projector(std::size_t n) const {
    const Eigen::Index rows = blocks.empty() ? 0 : blocks.front().rows();
    if (n >= blocks.size())
        return ComplexMatrix::Zero(rows, rows);
    return blocks[n] * blocks[n].adjoint();
}

ComplexMatrix Filtration::cumulative_projector(std::size_t n) const {
    const Eigen::Index rows = blocks.empty() ? 0 : blocks.front().rows();
    ComplexMatrix p = ComplexMatrix::Zero(rows, rows);
    for (std::size_t k = 0; k <= n && k < blocks.size(); ++k)
        p.noalias() += blocks[k] * blocks[k].adjoint();
    return p;
}

double block_structure_residual(const std::vector<ComplexMatrix>& blocks, const ComplexMatrix& s,
                                const ComplexMatrix& t) {
    double worst = 0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (blocks[j].cols() == 0)
            continue;
        const ComplexMatrix sj = s * blocks[j];
        const ComplexMatrix tj = t * blocks[j];
        for (std::size_t i = j + 2; i < blocks.size(); ++i) {
            if (blocks[i].cols() == 0)
                continue;
            worst = std::max(worst, (blocks[i].adjoint() * sj).norm());
            worst = std::max(worst, (blocks[i].adjoint() * tj).norm());
        }
    }
    return worst;
}

double invariance_residual(const std::vector<ComplexMatrix>& blocks, const ComplexMatrix& s,
                           const ComplexMatrix& t) {
    Filtration tmp;
    tmp.blocks = blocks;
    tmp.dims.reserve(blocks.size());
    for (const auto& b : blocks)
        tmp.dims.push_back(static_cast<std::size_t>(b.cols()));
    const ComplexMatrix u = tmp.basis();
    const auto leak = [&](const ComplexMatrix& op) {
        const ComplexMatrix image = op * u;
        const ComplexMatrix inside = u * (u.adjoint() * image);
        return (image - inside).norm();
    };
    return leak(s) + leak(t);
}

Filtration build_filtration(const ComplexMatrix& s, const ComplexMatrix& t,
                            const ComplexMatrix& m_basis, std::optional<double> rank_tol) {
    detail::require_square(s, "build_filtration");
    detail::require_square(t, "build_filtration");
    const Eigen::Index m = s.rows();
    if (t.rows() != m || m_basis.rows() != m)
        throw DimensionError("build_filtration: S, T and M must live in the same space");
    if (m_basis.cols() == 0 || m_basis.cols() > m)
        throw DimensionError("build_filtration: M must have between 1 and m basis vectors");
    require_orthonormal(m_basis);

    Filtration f;
    f.dim_m = static_cast<std::size_t>(m_basis.cols());
    f.rank_tolerance = rank_tol.value_or(default_rank_tolerance(m));
    f.blocks.push_back(m_basis);
    f.dims.push_back(f.dim_m);

    // Orthonormal basis of V_n, and of the Krylov space of T.
    ComplexMatrix span(m, m);
    Eigen::Index span_count = 0;
    span.leftCols(m_basis.cols()) = m_basis;
    span_count = m_basis.cols();

    ComplexMatrix krylov(m, m);
    Eigen::Index krylov_count = m_basis.cols();
    krylov.leftCols(krylov_count) = m_basis;
    Eigen::Index krylov_head = 0; // first column of the newest Krylov block
    bool krylov_alive = true;

    const std::size_t max_degree = 2 * static_cast<std::size_t>(m);
    for (std::size_t n = 1; n <= max_degree && span_count < m; ++n) {
        // Next Krylov block: T times the newest block, orthogonalized.
        const Eigen::Index new_head = krylov_count;
        if (krylov_alive) {
            const ComplexMatrix images = t * krylov.middleCols(krylov_head, new_head - krylov_head);
            for (Eigen::Index c = 0; c < images.cols(); ++c)
                try_append(krylov, krylov_count, images.col(c), f.rank_tolerance);
            krylov_head = new_head;
            krylov_alive = krylov_count > new_head;
        }

        const Eigen::Index block_start = span_count;
        const ComplexMatrix pushed = s * f.blocks.back();
        for (Eigen::Index c = 0; c < pushed.cols(); ++c)
            try_append(span, span_count, pushed.col(c), f.rank_tolerance);
        for (Eigen::Index c = new_head; c < krylov_count; ++c)
            try_append(span, span_count, krylov.col(c), f.rank_tolerance);

        const Eigen::Index added = span_count - block_start;
        if (added == 0 && !krylov_alive)
            break;
        f.blocks.push_back(span.middleCols(block_start, added));
        f.dims.push_back(static_cast<std::size_t>(added));
    }
    while (f.blocks.size() > 1 && f.dims.back() == 0) {
        f.blocks.pop_back();
        f.dims.pop_back();
    }

    f.block_residual = block_structure_residual(f.blocks, s, t);
    f.invariance_residual = invariance_residual(f.blocks, s, t);
    return f;
}

LemmaReport verify_lemma_conclusions(const Filtration& f, const ComplexMatrix& s,
                                     const ComplexMatrix& t, Complex lambda,
                                     const ComplexMatrix& m_basis, const LemmaTolerances& tol) {
    detail::require_square(s, "verify_lemma_conclusions");
    const Eigen::Index m = s.rows();
    if (t.rows() != m || t.cols() != m || m_basis.rows() != m || f.blocks.empty() ||
        f.blocks.front().rows() != m || f.blocks.front().cols() != m_basis.cols())
        throw DimensionError("verify_lemma_conclusions: filtration does not match the inputs");

    LemmaReport r;
    ComplexMatrix shifted = commutator(s, t);
    shifted.diagonal().array() += lambda;
    const ComplexMatrix inside = m_basis * (m_basis.adjoint() * shifted);
    r.hypothesis_residual = (shifted - inside).norm();
    r.block_residual = block_structure_residual(f.blocks, s, t);
    r.invariance_residual = invariance_residual(f.blocks, s, t);

    const double norm_s = operator_norm(s), norm_t = operator_norm(t);
    r.hypothesis_limit = tol.hypothesis * std::max(1.0, hs_norm(s) * hs_norm(t));
    r.structure_limit = tol.structure * (norm_s + norm_t);
    r.invariance_limit = tol.invariance * std::max(1.0, norm_s + norm_t);

    r.hypothesis_pass = r.hypothesis_residual <= r.hypothesis_limit;
    r.structure_pass = r.block_residual <= r.structure_limit;
    r.invariance_pass = r.invariance_residual <= r.invariance_limit;
    r.dims_pass = true;
    for (std::size_t n = 0; n < f.dims.size(); ++n)
        if (f.dims[n] > (n + 1) * f.dim_m)
            r.dims_pass = false;
    r.conclusions_applicable = r.hypothesis_pass;
    return r;
}

ComplexMatrix first_coordinate_basis(Eigen::Index m) {
    ComplexMatrix e = ComplexMatrix::Zero(m, 1);
    if (m > 0)
        e(0, 0) = 1.0;
    return e;
}

} // namespace commfact
