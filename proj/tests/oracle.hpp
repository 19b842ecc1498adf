#pragma once

// Reference computations written independently of the library internals.

#include "qdef/qmatrix.hpp"
#include "qdef/quat.hpp"
#include "qdef/rmodule.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace oracle {

using C = std::complex<double>;
using M2 = std::array<std::array<C, 2>, 2>;

// q0 + q1 i + q2 j + q3 k  ->  [[q0 + q1 I, q2 + q3 I], [-q2 + q3 I, q0 - q1 I]]
// (the standard Pauli-type representation, a different convention from the library's)
inline M2 pauli(const qdef::Quaternion& q) {
    return {{{C(q.q0, q.q1), C(q.q2, q.q3)}, {C(-q.q2, q.q3), C(q.q0, -q.q1)}}};
}

inline qdef::Quaternion from_pauli(const M2& m) {
    return {m[0][0].real(), m[0][0].imag(), m[0][1].real(), m[0][1].imag()};
}

inline M2 mul(const M2& a, const M2& b) {
    M2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

inline qdef::Quaternion product(const qdef::Quaternion& a, const qdef::Quaternion& b) {
    return from_pauli(mul(pauli(a), pauli(b)));
}

// 2n x 2n complex matrix of a quaternionic matrix under the Pauli convention.
inline Eigen::MatrixXcd complexify(const qdef::QMatrix& A) {
    Eigen::MatrixXcd M(2 * A.rows(), 2 * A.cols());
    for (std::size_t r = 0; r < A.rows(); ++r) {
        for (std::size_t c = 0; c < A.cols(); ++c) {
            const M2 b = pauli(A(r, c));
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) M(2 * r + i, 2 * c + j) = b[i][j];
        }
    }
    return M;
}

inline int complex_rank(const Eigen::MatrixXcd& M, double tol = 1e-9) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) > tol * std::max(1.0, s(0));
    return r;
}

// Quaternionic rank via the Pauli image (complex rank / 2).
inline int qrank(const qdef::QMatrix& A, double tol = 1e-9) { return complex_rank(complexify(A), tol) / 2; }

inline double max_abs(const Eigen::MatrixXcd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

// Componentwise left product of the defining formula, without library helpers.
inline qdef::QVector left_product(const qdef::Basis& B, const qdef::Quaternion& q, const qdef::QVector& phi) {
    qdef::QVector out(phi.dim());
    for (std::size_t k = 0; k < B.dim(); ++k) {
        qdef::Quaternion c;
        for (std::size_t m = 0; m < phi.dim(); ++m) c = c + product(B[k][m].conj(), phi[m]);
        const qdef::Quaternion qc = product(q, c);
        for (std::size_t m = 0; m < phi.dim(); ++m) out[m] = out[m] + product(B[k][m], qc);
    }
    return out;
}

inline double vdist(const qdef::QVector& a, const qdef::QVector& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        const auto x = a[k] - b[k];
        d = std::max({d, std::abs(x.q0), std::abs(x.q1), std::abs(x.q2), std::abs(x.q3)});
    }
    return d;
}

} // namespace oracle
