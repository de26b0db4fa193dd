#include "commfact/random.hpp"

#include <cmath>
#include <numbers>

namespace commfact {

std::uint64_t uniform_below(Prng& rng, std::uint64_t n) {
    if (n == 0)
        throw PreconditionError("uniform_below: empty range");
    // Largest multiple of n that fits; reject draws above it.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double uniform_open(Prng& rng) {
    // 53 random bits, shifted off zero by half an ulp.
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Prng& rng) {
    const double u1 = uniform_open(rng);
    const double u2 = uniform_open(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> random_permutation(std::size_t n, Prng& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Prng& rng) {
    ComplexMatrix m(rows, cols);
    // Row-major fill so the stream order does not depend on storage order.
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = standard_normal(rng);
            const double im = standard_normal(rng);
            m(i, j) = {re, im};
        }
    return m;
}

ComplexMatrix random_trace_zero(Eigen::Index m, std::uint64_t seed) {
    Prng rng(seed);
    ComplexMatrix a = ginibre(m, m, rng);
    const Complex shift = a.trace() / static_cast<double>(m);
    a.diagonal().array() -= shift;
    return a;
}

ComplexMatrix random_zero_diagonal(Eigen::Index m, Prng& rng) {
    ComplexMatrix a = ginibre(m, m, rng);
    a.diagonal().setZero();
    return a;
}

ComplexMatrix random_unitary(Eigen::Index m, Prng& rng) {
    const ComplexMatrix z = ginibre(m, m, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0)
            q.col(j) *= r(j, j) / mag;
    }
    return q;
}

} // namespace commfact
