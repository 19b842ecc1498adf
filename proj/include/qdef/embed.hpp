#pragma once

#include "qdef/qmatrix.hpp"
#include "qdef/rmodule.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qdef {

inline constexpr double kDefaultRankTol = 1e-10;

/// Complex adjoint representation of an r x c quaternionic matrix: a 2r x 2c
/// complex matrix built from the 2x2 blocks embed2x2(A_{nm}).
struct ChiMatrix {
    Eigen::MatrixXcd m;
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;
};

ChiMatrix chi(const QMatrix& A);

/// Complex coordinates (z1, z2) of each entry: chi(A) applied to to_complex(v)
/// equals to_complex(A v).
Eigen::VectorXcd to_complex(const QVector& v);
QVector from_complex(const Eigen::VectorXcd& x);

/// Antilinear structure map encoding right multiplication by j:
/// to_complex(v * j) = structure_j(to_complex(v)).
Eigen::VectorXcd structure_j(const Eigen::VectorXcd& x);

/// Right H-basis of ker(A); qdim is the quaternionic dimension.
struct KernelBasis {
    std::vector<QVector> vectors;
    std::size_t qdim = 0;
};

/// Threshold is rank_tol * sigma_max of chi(A). Throws InternalInconsistency if
/// the complex nullity is odd.
KernelBasis kernel_q(const QMatrix& A, double rank_tol = kDefaultRankTol);
std::size_t rank_q(const QMatrix& A, double rank_tol = kDefaultRankTol);

/// Singular values of chi(A), descending (each quaternionic value appears twice).
std::vector<double> singular_values_c(const QMatrix& A);
/// Largest singular value of chi(A); equals the operator norm of A.
double operator_norm(const QMatrix& A);

/// All 2n eigenvalues of chi(A), sorted by (real, imag). Throws NoConvergence.
std::vector<std::complex<double>> eigenvalues_c(const QMatrix& A);

/// Solves A x = b through chi(A). Throws SingularSystem when A is numerically
/// singular at the given rank tolerance.
QVector solve_q(const QMatrix& A, const QVector& b, double rank_tol = kDefaultRankTol);

/// Smallest eigenvalue of a quaternionic Hermitian matrix (via chi).
double min_hermitian_eigenvalue(const QMatrix& H);

/// Gram matrix G_{ab} = <v_a|v_b>.
QMatrix gram(const std::vector<QVector>& vs);

} // namespace qdef
