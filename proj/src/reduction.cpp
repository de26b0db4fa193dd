#include "commfact/reduction.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace commfact {

namespace {

enum class Part { Real, Imag };

double part_of(Complex z, Part p) { return p == Part::Real ? z.real() : z.imag(); }

// Smallest psi in [0, pi] with alpha + beta cos(psi) + kappa sin(psi) = 0,
// given that the left side is positive at 0 and negative at pi.
double solve_angle(double f11, double f22, double kappa) {
    const double alpha = 0.5 * (f11 + f22);
    const double beta = 0.5 * (f11 - f22);
    const double r = std::hypot(beta, kappa);
    const double delta = std::atan2(kappa, beta);
    const double c = std::acos(std::clamp(-alpha / r, -1.0, 1.0));
    constexpr double pi = std::numbers::pi;
    const double candidates[] = {delta + c, delta - c, delta + c - 2 * pi, delta - c + 2 * pi};
    double best = candidates[0];
    double best_gap = std::numeric_limits<double>::infinity();
    for (double psi : candidates) {
        const double gap = psi < 0 ? -psi : (psi > pi ? psi - pi : 0.0);
        if (gap < best_gap) {
            best_gap = gap;
            best = psi;
        }
    }
    return std::clamp(best, 0.0, pi);
}

// Rotate coordinates (i, j) so that Re or Im of a(i, i) becomes zero.
// Requires that part of a(i, i) and a(j, j) to have opposite signs.
void rotate_pair(ComplexMatrix& a, ComplexMatrix& q, Eigen::Index i, Eigen::Index j, Part part) {
    const Complex aii = a(i, i), ajj = a(j, j), aij = a(i, j), aji = a(j, i);
    // Hermitian and skew parts of the 2x2 block: A = H + iK.
    const Complex h12 = 0.5 * (aij + std::conj(aji));
    const Complex k12 = (aij - std::conj(aji)) / Complex(0, 2);

    double phi = 0, kappa = 0, f11 = 0, f22 = 0;
    if (part == Part::Real) {
        f11 = aii.real();
        f22 = ajj.real();
        kappa = h12.real();
    } else {
        // Keep v^* H v = 0: need Re(e^{i phi} h12) = 0.
        phi = std::abs(h12) > 0 ? 0.5 * std::numbers::pi - std::arg(h12) : 0.0;
        f11 = aii.imag();
        f22 = ajj.imag();
        kappa = (std::polar(1.0, phi) * k12).real();
    }
    const double theta = 0.5 * solve_angle(f11, f22, kappa);
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex e = std::polar(1.0, phi);

    // Columns (c, s e) and (s, -c e).
    Eigen::Matrix2cd u;
    u << c, s, s * e, -c * e;

    const Eigen::Index idx[2] = {i, j};
    ComplexMatrix cols(a.rows(), 2);
    cols << a.col(i), a.col(j);
    cols = cols * u;
    a.col(i) = cols.col(0);
    a.col(j) = cols.col(1);

    ComplexMatrix rows(2, a.cols());
    rows << a.row(i), a.row(j);
    rows = u.adjoint() * rows;
    a.row(i) = rows.row(0);
    a.row(j) = rows.row(1);

    ComplexMatrix qcols(q.rows(), 2);
    qcols << q.col(idx[0]), q.col(idx[1]);
    qcols = qcols * u;
    q.col(i) = qcols.col(0);
    q.col(j) = qcols.col(1);

    // The target entry is zero in exact arithmetic.
    if (part == Part::Real)
        a(i, i).real(0.0);
    else
        a(i, i).imag(0.0);
}

std::size_t zero_part(ComplexMatrix& a, ComplexMatrix& q, Part part) {
    const Eigen::Index m = a.rows();
    std::vector<Eigen::Index> active(static_cast<std::size_t>(m));
    for (Eigen::Index k = 0; k < m; ++k)
        active[static_cast<std::size_t>(k)] = k;

    std::size_t rotations = 0;
    while (active.size() > 1) {
        // Largest magnitude first; its partner is the largest of opposite sign.
        // The last two entries are equal and opposite up to rounding, so the
        // magnitude comparison would be decided by noise; take the lower index.
        std::size_t pi = 0;
        if (active.size() > 2)
            for (std::size_t k = 1; k < active.size(); ++k)
                if (std::abs(part_of(a(active[k], active[k]), part)) >
                    std::abs(part_of(a(active[pi], active[pi]), part)))
                    pi = k;
        const double vi = part_of(a(active[pi], active[pi]), part);
        if (vi == 0.0)
            break;

        std::size_t pj = active.size();
        double best = 0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            const double vk = part_of(a(active[k], active[k]), part);
            if (vk * vi < 0 && std::abs(vk) > best) {
                best = std::abs(vk);
                pj = k;
            }
        }
        if (pj == active.size())
            break; // only rounding-level mass of one sign is left

        rotate_pair(a, q, active[pi], active[pj], part);
        ++rotations;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(pi));
    }
    return rotations;
}

} // namespace

bool is_trace_zero(const ComplexMatrix& a, double rel_tol) {
    return std::abs(a.trace()) <= rel_tol * std::max(1.0, hs_norm(a));
}

DiagonalizationResult zero_diagonal_reduce(const ComplexMatrix& a, double tol) {
    detail::require_square(a, "zero_diagonal_reduce");
    if (!is_trace_zero(a))
        throw TraceError("zero_diagonal_reduce: trace is not zero, no zero-diagonal unitary "
                         "conjugate exists");

    DiagonalizationResult out;
    const Eigen::Index m = a.rows();
    out.q = ComplexMatrix::Identity(m, m);
    out.reduced = a;
    const double target = tol * std::max(1.0, hs_norm(a));

    const auto residual = [&] {
        return m == 0 ? 0.0 : out.reduced.diagonal().cwiseAbs().maxCoeff();
    };
    out.diag_residual = residual();
    while (out.diag_residual > target && out.sweeps < kMaxReductionSweeps) {
        out.rotations += zero_part(out.reduced, out.q, Part::Real);
        out.rotations += zero_part(out.reduced, out.q, Part::Imag);
        ++out.sweeps;
        const double r = residual();
        const bool stalled = r >= out.diag_residual;
        out.diag_residual = r;
        if (stalled)
            break;
    }
    out.converged = out.diag_residual <= target;
    return out;
}

ComplexMatrix apply_conjugation(const ComplexMatrix& q, const ComplexMatrix& m) {
    detail::require_square(q, "apply_conjugation");
    detail::require_square(m, "apply_conjugation");
    if (q.rows() != m.rows())
        throw DimensionError("apply_conjugation: dimension mismatch");
    const Eigen::Index n = q.rows();
    const double defect = (q.adjoint() * q - ComplexMatrix::Identity(n, n)).norm();
    if (defect > 1e-10 * std::max<double>(1.0, static_cast<double>(n)))
        throw PreconditionError("apply_conjugation: Q is not unitary");
    ComplexMatrix qm = q * m;
    return qm * q.adjoint();
}

} // namespace commfact
