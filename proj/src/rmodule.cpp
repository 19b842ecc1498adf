#include "qdef/rmodule.hpp"

#include "qdef/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qdef {

namespace {

void require_same_dim(std::size_t expected, std::size_t got) {
    if (expected != got) throw DimensionMismatch(expected, got);
}

} // namespace

QVector QVector::unit(std::size_t dim, std::size_t slot) {
    QVector v(dim);
    v[slot] = 1.0;
    return v;
}

double QVector::norm2() const {
    double s = 0.0;
    for (const auto& c : coords_) s += c.norm2();
    return s;
}

double QVector::norm() const { return std::sqrt(norm2()); }

QVector& QVector::operator+=(const QVector& o) {
    require_same_dim(dim(), o.dim());
    for (std::size_t k = 0; k < dim(); ++k) coords_[k] += o.coords_[k];
    return *this;
}

QVector& QVector::operator-=(const QVector& o) {
    require_same_dim(dim(), o.dim());
    for (std::size_t k = 0; k < dim(); ++k) coords_[k] -= o.coords_[k];
    return *this;
}

QVector operator*(const QVector& v, const Quaternion& q) {
    QVector out(v.dim());
    for (std::size_t k = 0; k < v.dim(); ++k) out[k] = v[k] * q;
    return out;
}

Quaternion inner(const QVector& phi, const QVector& psi) {
    require_same_dim(phi.dim(), psi.dim());
    Quaternion s;
    for (std::size_t k = 0; k < phi.dim(); ++k) s += phi[k].conj() * psi[k];
    return s;
}

QVector right_scale(const QVector& phi, const Quaternion& q) { return phi * q; }

double distance(const QVector& a, const QVector& b) {
    require_same_dim(a.dim(), b.dim());
    double d = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) d = std::max(d, distance(a[k], b[k]));
    return d;
}

Basis::Basis(std::vector<QVector> vectors, std::string label)
    : vectors_(std::move(vectors)), label_(std::move(label)) {
    if (vectors_.empty()) throw PreconditionFailed("basis '" + label_ + "' is empty");
    for (const auto& v : vectors_) {
        if (v.dim() != vectors_.size()) {
            throw DimensionMismatch("basis '" + label_ + "' needs " +
                                    std::to_string(vectors_.size()) +
                                    " vectors of that dimension, got one of dimension " +
                                    std::to_string(v.dim()));
        }
    }
    const double defect = orthonormality_defect();
    if (!(defect <= kOrthonormalTol)) {
        throw PreconditionFailed("basis '" + label_ + "' is not orthonormal (defect " +
                                 std::to_string(defect) + ")");
    }
}

Basis Basis::canonical(std::size_t dim) {
    std::vector<QVector> vs;
    vs.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) vs.push_back(QVector::unit(dim, k));
    return Basis(std::move(vs), "canonical");
}

double Basis::orthonormality_defect() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < vectors_.size(); ++a) {
        for (std::size_t b = a; b < vectors_.size(); ++b) {
            const Quaternion g = inner(vectors_[a], vectors_[b]);
            worst = std::max(worst, distance(g, Quaternion(a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

QVector left_scale(const LeftMul& L, const Quaternion& q, const QVector& phi) {
    const Basis& B = L.basis();
    require_same_dim(B.dim(), phi.dim());
    QVector out(phi.dim());
    for (std::size_t k = 0; k < B.dim(); ++k) {
        out += B[k] * (q * inner(B[k], phi));
    }
    return out;
}

QVector left_solve(const LeftMul& L, const Quaternion& q, const QVector& psi) {
    if (q.norm2() == 0.0) throw ZeroScalar("left multiplication by zero is not invertible");
    return left_scale(L, q.conj() / q.norm2(), psi);
}

std::vector<Quaternion> expand(const Basis& B, const QVector& phi) {
    require_same_dim(B.dim(), phi.dim());
    std::vector<Quaternion> c;
    c.reserve(B.dim());
    for (const auto& e : B.vectors()) c.push_back(inner(e, phi));
    return c;
}

QVector resum(const Basis& B, std::span<const Quaternion> coeffs) {
    require_same_dim(B.dim(), coeffs.size());
    QVector out(B.dim());
    for (std::size_t k = 0; k < B.dim(); ++k) out += B[k] * coeffs[k];
    return out;
}

QVector delta_map(const LeftMul& L1, const LeftMul& L2, const Quaternion& q, const QVector& psi) {
    if (q.norm2() == 0.0) throw ZeroScalar("basis-change map needs a nonzero scalar");
    require_same_dim(L1.dim(), L2.dim());
    const QVector phi = left_solve(L1, q, psi);
    return left_scale(L2, q, phi);
}

std::vector<QVector> orthonormalize(std::span<const QVector> vectors, double tol) {
    std::vector<QVector> out;
    for (const auto& input : vectors) {
        QVector v = input;
        const double scale = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : out) v -= e * inner(e, v);
        }
        const double pivot = v.norm();
        if (scale > 0.0 && pivot >= tol * scale) out.push_back(v * (1.0 / pivot));
    }
    return out;
}

Basis gram_schmidt(std::span<const QVector> vectors, std::string label) {
    std::vector<QVector> out;
    out.reserve(vectors.size());
    for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
        QVector v = vectors[idx];
        const double scale = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : out) v -= e * inner(e, v);
        }
        const double pivot = v.norm();
        if (scale == 0.0 || pivot < kOrthonormalTol * scale) {
            throw RankDeficient("vector " + std::to_string(idx) +
                                " is right-linearly dependent on its predecessors");
        }
        out.push_back(v * (1.0 / pivot));
    }
    return Basis(std::move(out), std::move(label));
}

} // namespace qdef
