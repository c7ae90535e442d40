#pragma once

// Thin SVD and the lifting of vector proximity operators to spectral ones:
//
//     prox_Psi(X) = U diag(prox_psi(sigma(X))) V^T
//
// for Psi(X) = psi(sigma(X)) with psi a symmetric gauge.

#include "tenscomp/errors.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <string>
#include <type_traits>

namespace tenscomp {

template <typename Scalar>
struct SvdFactors {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Matrix U;     // p x r, orthonormal columns
    Vector sigma; // r, non-increasing, >= 0
    Matrix V;     // q x r, orthonormal columns

    Matrix reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }
};

/// Thin SVD, r = min(p, q).
template <typename Derived>
SvdFactors<typename Derived::Scalar> svd_thin(const Eigen::MatrixBase<Derived> &X) {
    using Scalar = typename Derived::Scalar;
    using Matrix = typename SvdFactors<Scalar>::Matrix;

    if (!X.allFinite())
        throw InvalidArgument("svd_thin: input has non-finite entries");

    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericFailure("svd_thin: decomposition of " +
                             std::to_string(X.rows()) + "x" +
                             std::to_string(X.cols()) +
                             " matrix did not converge");
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Largest singular value; 0 for an empty or zero matrix.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived> &X) {
    if (X.size() == 0)
        return 0;
    return svd_thin(X).sigma(0);
}

/// U diag(vector_prox(sigma)) V^T using the thin factors of X.
///
/// `vector_prox` receives the sorted nonnegative spectrum and must return a
/// vector of the same length. The zero matrix maps to the zero matrix.
template <typename Derived, typename VectorProx>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
spectral_prox(const Eigen::MatrixBase<Derived> &X, VectorProx &&vector_prox) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    if (X.isZero(0))
        return Matrix::Zero(X.rows(), X.cols());

    const auto f = svd_thin(X);
    const Vector mapped = vector_prox(static_cast<const Vector &>(f.sigma));
    if (mapped.size() != f.sigma.size())
        throw ContractViolation("spectral_prox: vector prox returned " +
                                std::to_string(mapped.size()) +
                                " values for a spectrum of length " +
                                std::to_string(f.sigma.size()));
    return f.U * mapped.asDiagonal() * f.V.transpose();
}

} // namespace tenscomp
