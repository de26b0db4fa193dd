#pragma once

// Dense complex matrix primitives: commutators, the three unitarily invariant
// norms used throughout (operator, Hilbert-Schmidt, nuclear), singular value
// profiles and the polar decomposition.
//
// Everything here is a free function over Eigen expressions, templated on the
// scalar through the expression type. The rest of the library instantiates
// them with std::complex<double>.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <limits>
#include <string>

#include "commfact/errors.hpp"

namespace commfact {

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;
using RealVector = RealVectorT<double>;
using Complex = std::complex<double>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (m.rows() != m.cols())
        throw DimensionError(std::string(what) + ": matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

template <typename Derived>
RealOf<Derived> rank_cutoff(const Eigen::MatrixBase<Derived>& m, RealOf<Derived> largest) {
    using Real = RealOf<Derived>;
    return Real(std::max(m.rows(), m.cols())) * std::numeric_limits<Real>::epsilon() * largest;
}

} // namespace detail

/// BC - CB.
template <typename DerivedB, typename DerivedC>
typename DerivedB::PlainObject commutator(const Eigen::MatrixBase<DerivedB>& b,
                                          const Eigen::MatrixBase<DerivedC>& c) {
    detail::require_square(b, "commutator");
    detail::require_square(c, "commutator");
    if (b.rows() != c.rows())
        throw DimensionError("commutator: operands have different dimensions");
    typename DerivedB::PlainObject out = b * c;
    out.noalias() -= c * b;
    return out;
}

/// Hilbert-Schmidt (Frobenius) norm.
template <typename Derived>
RealOf<Derived> hs_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.norm();
}

/// All singular values, non-increasing. Throws NumericalError if the SVD does
/// not converge or returns non-finite values.
template <typename Derived>
RealVectorT<RealOf<Derived>> singular_values(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    if (m.size() == 0)
        return {};
    Eigen::BDCSVD<Plain> svd(m.eval());
    if (svd.info() != Eigen::Success)
        throw NumericalError("singular_values: SVD did not converge");
    RealVectorT<RealOf<Derived>> values = svd.singularValues();
    if (!values.allFinite())
        throw NumericalError("singular_values: non-finite singular value");
    return values;
}

/// Largest singular value, from the full spectrum.
template <typename Derived>
RealOf<Derived> operator_norm(const Eigen::MatrixBase<Derived>& m) {
    detail::require_square(m, "operator_norm");
    const auto values = singular_values(m);
    return values.size() == 0 ? RealOf<Derived>(0) : values(0);
}

/// Trace norm: the sum of the singular values.
template <typename Derived>
RealOf<Derived> nuclear_norm(const Eigen::MatrixBase<Derived>& m) {
    return singular_values(m).sum();
}

/// Non-increasing singular values s_1 >= s_2 >= ... together with their
/// running sums.
template <typename Real>
struct SingularProfileT {
    RealVectorT<Real> values;
    /// partial_sums(k) = s_1 + ... + s_{k+1}
    RealVectorT<Real> partial_sums;

    Eigen::Index size() const { return values.size(); }

    /// s_1 + ... + s_l for 0 <= l <= size().
    Real sum_of_largest(Eigen::Index l) const {
        return l == 0 ? Real(0) : partial_sums(l - 1);
    }
};
using SingularProfile = SingularProfileT<double>;

template <typename Derived>
SingularProfileT<RealOf<Derived>> singular_profile(const Eigen::MatrixBase<Derived>& m) {
    detail::require_square(m, "singular_profile");
    SingularProfileT<RealOf<Derived>> profile;
    profile.values = singular_values(m);
    profile.partial_sums.resize(profile.values.size());
    RealOf<Derived> running = 0;
    for (Eigen::Index i = 0; i < profile.values.size(); ++i) {
        running += profile.values(i);
        profile.partial_sums(i) = running;
    }
    return profile;
}

/// M = isometry * modulus with modulus = (M^* M)^{1/2} positive semidefinite
/// and isometry a partial isometry whose initial space is range(modulus).
template <typename MatrixType>
struct PolarDecomposition {
    MatrixType isometry;
    MatrixType modulus;
};

/// Polar decomposition through a thin SVD. Works for rectangular input as
/// well, which the lower-bound harness needs for off-diagonal blocks.
template <typename Derived>
PolarDecomposition<typename Derived::PlainObject>
polar_decompose(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    const Eigen::Index rows = m.rows(), cols = m.cols();
    PolarDecomposition<Plain> out{Plain::Zero(rows, cols), Plain::Zero(cols, cols)};
    if (m.size() == 0)
        return out;

    Eigen::BDCSVD<Plain> svd(m.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("polar_decompose: SVD did not converge");
    const auto& sigma = svd.singularValues();
    if (!sigma.allFinite())
        throw NumericalError("polar_decompose: non-finite singular value");

    const auto cutoff = detail::rank_cutoff(m, sigma.size() ? sigma(0) : RealOf<Derived>(0));
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cutoff)
        ++rank;

    const auto& u = svd.matrixU();
    const auto& v = svd.matrixV();
    out.isometry.noalias() = u.leftCols(rank) * v.leftCols(rank).adjoint();
    out.modulus.noalias() = v * sigma.asDiagonal() * v.adjoint();
    // Hermitian up to rounding; make it exact.
    out.modulus = (out.modulus + out.modulus.adjoint().eval()) / RealOf<Derived>(2);
    return out;
}

/// ||M M^* - M^* M||_2.
template <typename Derived>
RealOf<Derived> normality_defect(const Eigen::MatrixBase<Derived>& m) {
    detail::require_square(m, "normality_defect");
    typename Derived::PlainObject gram = m * m.adjoint();
    gram.noalias() -= m.adjoint() * m;
    return gram.norm();
}

/// True iff ||M M^* - M^* M||_2 <= tol * max(1, ||M||^2).
template <typename Derived>
bool is_normal(const Eigen::MatrixBase<Derived>& m, RealOf<Derived> tol) {
    const auto op = operator_norm(m);
    return normality_defect(m) <= tol * std::max(RealOf<Derived>(1), op * op);
}

} // namespace commfact
