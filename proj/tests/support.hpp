#pragma once

#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "commfact/matrix_core.hpp"
#include "commfact/random.hpp"

namespace testing {

using commfact::Complex;
using commfact::ComplexMatrix;

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline ComplexMatrix diag(const std::vector<Complex>& d) {
    ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
        m(Eigen::Index(i), Eigen::Index(i)) = d[i];
    return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

// Random test inputs over a fixed seed stream; each property loops over a
// handful of sizes and draws.
inline commfact::Prng rng_for(std::uint64_t seed) { return commfact::Prng(seed * 7919 + 17); }

inline ComplexMatrix random_normal_matrix(Eigen::Index m, commfact::Prng& rng) {
    const ComplexMatrix u = commfact::random_unitary(m, rng);
    const ComplexMatrix d = commfact::ginibre(m, 1, rng).col(0).asDiagonal();
    return u * d * u.adjoint();
}

} // namespace testing
