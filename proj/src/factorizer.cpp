#include "commfact/factorizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commfact/random.hpp"
#include "commfact/reduction.hpp"

namespace commfact {

namespace {

// Symmetric pair weights s_ij = |a_ij|^2 + |a_ji|^2, zero diagonal.
Eigen::MatrixXd pair_weights(const ComplexMatrix& reduced) {
    Eigen::MatrixXd w = reduced.cwiseAbs2();
    Eigen::MatrixXd s = w + w.transpose();
    s.diagonal().setZero();
    return s;
}

// sum_{i<j} s_ij / |b_i - b_j|^2
double weighted_objective(const Eigen::MatrixXd& s, std::span<const Complex> b) {
    const auto m = static_cast<Eigen::Index>(b.size());
    double total = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
        double col = 0;
        for (Eigen::Index i = 0; i < j; ++i)
            col += s(i, j) / std::norm(b[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)]);
        total += col;
    }
    return total;
}

void require_distinct(std::span<const Complex> b) {
    std::vector<Complex> sorted(b.begin(), b.end());
    const auto less = [](Complex x, Complex y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    };
    std::sort(sorted.begin(), sorted.end(), less);
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw PreconditionError("diagonal of B must have pairwise distinct entries");
}

ComplexMatrix c_from_b_unchecked(const ComplexMatrix& reduced, std::span<const Complex> b) {
    const Eigen::Index m = reduced.rows();
    ComplexMatrix c = ComplexMatrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            if (i != j)
                c(i, j) = reduced(i, j) / (b[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)]);
    return c;
}

} // namespace

double FactorizationCertificate::ratio_sq_minus_log_m() const {
    return ratio * ratio - std::log(static_cast<double>(std::max<std::size_t>(m, 1)));
}

ComplexMatrix c_from_b(const ComplexMatrix& reduced, std::span<const Complex> b, double tol) {
    detail::require_square(reduced, "c_from_b");
    if (static_cast<std::size_t>(reduced.rows()) != b.size())
        throw DimensionError("c_from_b: need one diagonal entry per row");
    const double limit = tol * std::max(1.0, hs_norm(reduced));
    if (reduced.rows() > 0 && reduced.diagonal().cwiseAbs().maxCoeff() > limit)
        throw PreconditionError("c_from_b: matrix does not have zero diagonal");
    require_distinct(b);
    return c_from_b_unchecked(reduced, b);
}

double assignment_objective(const ComplexMatrix& reduced, std::span<const Complex> b) {
    detail::require_square(reduced, "assignment_objective");
    if (static_cast<std::size_t>(reduced.rows()) != b.size())
        throw DimensionError("assignment_objective: need one diagonal entry per row");
    return weighted_objective(pair_weights(reduced), b);
}

std::vector<Complex> local_swap_improve(const ComplexMatrix& reduced, std::vector<Complex> b,
                                        std::size_t max_passes) {
    detail::require_square(reduced, "local_swap_improve");
    if (static_cast<std::size_t>(reduced.rows()) != b.size())
        throw DimensionError("local_swap_improve: need one diagonal entry per row");
    require_distinct(b);

    const Eigen::MatrixXd s = pair_weights(reduced);
    const std::size_t m = b.size();
    double objective = weighted_objective(s, b);

    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                // Only pairs touching i or j change; the (i, j) term is symmetric.
                double delta = 0;
                for (std::size_t k = 0; k < m; ++k) {
                    if (k == i || k == j)
                        continue;
                    const double wi = s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
                    const double wj = s(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
                    delta += (wi - wj) * (1.0 / std::norm(b[j] - b[k]) - 1.0 / std::norm(b[i] - b[k]));
                }
                if (delta < -1e-13 * objective) {
                    std::swap(b[i], b[j]);
                    objective += delta;
                    changed = true;
                }
            }
        }
        if (!changed)
            break;
    }
    return b;
}

double mean_c2_over_permutations(const ComplexMatrix& reduced, std::span<const Complex> points) {
    detail::require_square(reduced, "mean_c2_over_permutations");
    const std::size_t m = points.size();
    if (static_cast<std::size_t>(reduced.rows()) != m)
        throw DimensionError("mean_c2_over_permutations: need one point per row");
    if (m > 8)
        throw PreconditionError("mean_c2_over_permutations: m! enumeration capped at m = 8");
    if (m > 0 && reduced.diagonal().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, hs_norm(reduced)))
        throw PreconditionError("mean_c2_over_permutations: matrix does not have zero diagonal");
    require_distinct(points);
    if (m < 2)
        return 0.0;

    const Eigen::MatrixXd w = reduced.cwiseAbs2();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    long double total = 0;
    std::size_t count = 0;
    do {
        long double value = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j)
                    value += w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
                             static_cast<long double>(std::norm(points[perm[i]] - points[perm[j]]));
        total += value;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(total / static_cast<long double>(count));
}

FactorizationCertificate factor(const ComplexMatrix& a, const FactorOptions& options) {
    detail::require_square(a, "factor");
    if (a.rows() == 0)
        throw DimensionError("factor: empty matrix");
    if (!a.allFinite())
        throw PreconditionError("factor: matrix has non-finite entries");
    if (options.trials == 0)
        throw PreconditionError("factor: need at least one trial");

    const auto reduction = zero_diagonal_reduce(a, options.tol);
    const Eigen::Index m = a.rows();
    const auto lattice = gaussian_points(static_cast<std::size_t>(m));
    const Eigen::MatrixXd weights = pair_weights(reduction.reduced);

    FactorizationCertificate cert;
    cert.m = static_cast<std::size_t>(m);
    cert.seed = options.seed;
    cert.trials = options.trials;
    cert.prng = std::string(kPrngName);
    cert.q = reduction.q;
    cert.diag_residual = reduction.diag_residual;

    double best = std::numeric_limits<double>::infinity();
    std::vector<Complex> b(static_cast<std::size_t>(m));
    for (std::size_t t = 0; t < options.trials; ++t) {
        Prng rng(options.seed + t);
        const auto perm = random_permutation(static_cast<std::size_t>(m), rng);
        for (std::size_t i = 0; i < perm.size(); ++i)
            b[i] = lattice.points[perm[i]];
        const double objective = weighted_objective(weights, b);
        if (objective < best) {
            best = objective;
            cert.assignment = b;
            cert.best_trial = t;
        }
    }
    if (options.optimize_assignment) {
        cert.assignment = local_swap_improve(reduction.reduced, cert.assignment, options.max_swap_passes);
        cert.optimized_assignment = true;
    }

    const ComplexMatrix c_reduced = c_from_b_unchecked(reduction.reduced, cert.assignment);
    ComplexVector diag(m);
    for (Eigen::Index i = 0; i < m; ++i)
        diag(i) = cert.assignment[static_cast<std::size_t>(i)];

    const ComplexMatrix& q = reduction.q;
    ComplexMatrix qd = q * diag.asDiagonal();
    cert.b.noalias() = qd * q.adjoint();
    ComplexMatrix qc = q * c_reduced;
    cert.c.noalias() = qc * q.adjoint();

    cert.residual = (a - commutator(cert.b, cert.c)).norm();
    cert.op_norm_b = operator_norm(cert.b);
    cert.hs_norm_c = hs_norm(cert.c);
    cert.hs_norm_a = hs_norm(a);
    cert.ratio = cert.hs_norm_a > 0 ? cert.op_norm_b * cert.hs_norm_c / cert.hs_norm_a : 0.0;
    cert.bound = std::sqrt(kCalibratedC + std::log(static_cast<double>(m)));
    cert.normality_defect = normality_defect(cert.b);

    const double scale = std::max(1.0, cert.op_norm_b * cert.hs_norm_c);
    cert.valid = reduction.converged && cert.residual <= options.tol * scale &&
                 cert.normality_defect <= options.tol * std::max(1.0, cert.op_norm_b * cert.op_norm_b) &&
                 cert.op_norm_b <= lattice.radius_bound + 1e-9;
    return cert;
}

} // namespace commfact
