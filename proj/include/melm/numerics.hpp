#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "melm/errors.hpp"

namespace melm {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

/// Relative singular-value cutoff used by pseudoinverse and condition_number.
inline constexpr double kSingularValueTol = 1e-12;

namespace detail {

template <typename Derived>
std::string shape_of(const Eigen::MatrixBase<Derived>& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* who) {
    if (!m.allFinite())
        throw std::invalid_argument(std::string(who) + ": " + shape_of(m) +
                                    " matrix has non-finite entries");
}

template <typename Derived>
VectorX<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Eigen::JacobiSVD<MatrixX<Scalar>> dec(m.derived());
    if (dec.info() != Eigen::Success)
        throw NumericError("svd: did not converge for " + shape_of(m) + " matrix");
    return dec.singularValues();
}

}  // namespace detail

template <typename Scalar>
struct SvdDecomposition {
    MatrixX<Scalar> u;                 // rows x k, k = min(rows, cols)
    VectorX<Scalar> singular_values;   // descending, non-negative
    MatrixX<Scalar> vt;                // k x cols
};

/// Thin SVD, M = U * diag(s) * Vt.
template <typename Derived>
SvdDecomposition<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    detail::require_finite(m, "svd");
    Eigen::JacobiSVD<MatrixX<Scalar>> dec(m.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw NumericError("svd: did not converge for " + detail::shape_of(m) + " matrix");
    return {dec.matrixU(), dec.singularValues(), dec.matrixV().transpose()};
}

/// Moore-Penrose pseudoinverse. Singular values below tol * s_max are treated
/// as zero; a zero matrix inverts to the zero matrix of transposed shape.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudoinverse(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar tol = typename Derived::Scalar(kSingularValueTol)) {
    using Scalar = typename Derived::Scalar;
    if (tol <= Scalar(0)) throw std::invalid_argument("pseudoinverse: tol must be positive");
    const auto dec = svd(m);
    const Scalar s_max = dec.singular_values.size() > 0 ? dec.singular_values[0] : Scalar(0);
    if (s_max == Scalar(0)) return MatrixX<Scalar>::Zero(m.cols(), m.rows());
    const Scalar cutoff = tol * s_max;
    VectorX<Scalar> inv = VectorX<Scalar>::Zero(dec.singular_values.size());
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        if (dec.singular_values[i] >= cutoff) inv[i] = Scalar(1) / dec.singular_values[i];
    return dec.vt.transpose() * inv.asDiagonal() * dec.u.transpose();
}

/// K2(M) = s_max / s_min over the singular values of M, +infinity when M is
/// rank deficient at the cutoff. Requires rows >= cols.
template <typename Derived>
typename Derived::Scalar condition_number(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar tol = typename Derived::Scalar(kSingularValueTol)) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() < m.cols())
        throw std::invalid_argument("condition_number: matrix is " + detail::shape_of(m) +
                                    ", expected rows >= cols");
    detail::require_finite(m, "condition_number");
    const VectorX<Scalar> s = detail::singular_values(m);
    const Scalar s_max = s[0];
    const Scalar s_min = s[s.size() - 1];
    if (s_max == Scalar(0) || s_min < tol * s_max)
        return std::numeric_limits<Scalar>::infinity();
    return s_max / s_min;
}

/// Frobenius norm; equals the vector 2-norm for single-column matrices.
template <typename Derived>
typename Derived::Scalar l2_norm(const Eigen::MatrixBase<Derived>& m) {
    detail::require_finite(m, "l2_norm");
    return m.norm();
}

}  // namespace melm
