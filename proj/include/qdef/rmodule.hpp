#pragma once

#include "qdef/quat.hpp"

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qdef {

inline constexpr double kOrthonormalTol = 1e-10;

/// Finite vector of the right module H^n, stored in canonical coordinates.
class QVector {
public:
    QVector() = default;
    explicit QVector(std::size_t dim) : coords_(dim) {}
    explicit QVector(std::vector<Quaternion> coords) : coords_(std::move(coords)) {}
    QVector(std::initializer_list<Quaternion> coords) : coords_(coords) {}

    static QVector unit(std::size_t dim, std::size_t slot);

    std::size_t dim() const { return coords_.size(); }
    Quaternion& operator[](std::size_t k) { return coords_[k]; }
    const Quaternion& operator[](std::size_t k) const { return coords_[k]; }
    std::span<const Quaternion> coords() const { return coords_; }
    std::span<Quaternion> coords() { return coords_; }

    double norm2() const;
    double norm() const;

    QVector& operator+=(const QVector& o);
    QVector& operator-=(const QVector& o);
    friend QVector operator+(QVector a, const QVector& b) { return a += b; }
    friend QVector operator-(QVector a, const QVector& b) { return a -= b; }
    /// Right scalar action phi * q.
    friend QVector operator*(const QVector& v, const Quaternion& q);

private:
    std::vector<Quaternion> coords_;
};

/// <phi|psi> = sum conj(phi_k) psi_k. Throws DimensionMismatch.
Quaternion inner(const QVector& phi, const QVector& psi);
QVector right_scale(const QVector& phi, const Quaternion& q);
/// Max component distance between two vectors of equal dimension.
double distance(const QVector& a, const QVector& b);

/// An orthonormal Hilbert basis of H^n. Construction validates orthonormality
/// (tolerance kOrthonormalTol) and never repairs its input.
class Basis {
public:
    Basis(std::vector<QVector> vectors, std::string label);

    static Basis canonical(std::size_t dim);

    std::size_t dim() const { return vectors_.size(); }
    const QVector& operator[](std::size_t k) const { return vectors_[k]; }
    const std::vector<QVector>& vectors() const { return vectors_; }
    const std::string& label() const { return label_; }

    /// Largest |<e_j|e_k> - delta_jk| over all pairs.
    double orthonormality_defect() const;

private:
    std::vector<QVector> vectors_;
    std::string label_;
};

/// Left scalar multiplication induced by a basis: q.phi = sum_k e_k q <e_k|phi>.
class LeftMul {
public:
    explicit LeftMul(Basis basis) : basis_(std::make_shared<const Basis>(std::move(basis))) {}
    explicit LeftMul(std::shared_ptr<const Basis> basis) : basis_(std::move(basis)) {}

    static LeftMul canonical(std::size_t dim) { return LeftMul(Basis::canonical(dim)); }

    const Basis& basis() const { return *basis_; }
    std::size_t dim() const { return basis_->dim(); }

private:
    std::shared_ptr<const Basis> basis_;
};

/// Throws DimensionMismatch.
QVector left_scale(const LeftMul& L, const Quaternion& q, const QVector& phi);

/// Solves q.phi = psi for phi, i.e. applies (conj(q)/|q|^2). Throws ZeroScalar.
QVector left_solve(const LeftMul& L, const Quaternion& q, const QVector& psi);

/// Coefficients c_k = <e_k|phi>, so that phi = sum_k e_k c_k.
std::vector<Quaternion> expand(const Basis& B, const QVector& phi);
QVector resum(const Basis& B, std::span<const Quaternion> coeffs);

/// Basis-change map: sends L1_q(phi) to L2_q(phi). The input psi is any
/// vector, since left multiplication by q != 0 is onto. Throws ZeroScalar and
/// DimensionMismatch.
QVector delta_map(const LeftMul& L1, const LeftMul& L2, const Quaternion& q, const QVector& psi);

/// Orthonormal right-basis of the span of `vectors` (same right-hand
/// projections as gram_schmidt); dependent vectors are dropped.
std::vector<QVector> orthonormalize(std::span<const QVector> vectors, double tol = kOrthonormalTol);

/// Orthonormalizes with right-hand coefficients (v -= e_k <e_k|v>), with one
/// reorthogonalization pass. Throws RankDeficient when a pivot falls below
/// kOrthonormalTol relative to the input vector.
Basis gram_schmidt(std::span<const QVector> vectors, std::string label = "gram_schmidt");

} // namespace qdef
