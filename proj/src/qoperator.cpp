#include "qdef/qoperator.hpp"

#include "qdef/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qdef {

QVector apply(const QOperator& A, const QVector& phi) {
    if (A.dim() != phi.dim()) throw DimensionMismatch(A.dim(), phi.dim());
    return A * phi;
}

QOperator left_scalar_matrix(const LeftMul& L, const Quaternion& q) {
    return matrix_of(L.dim(), [&](const QVector& v) { return left_scale(L, q, v); });
}

QOperator shifted(const QOperator& A, const LeftMul& L, const Quaternion& q) {
    return A - left_scalar_matrix(L, q);
}

SymmetryReport symmetry_predicates(const QOperator& A, const LeftMul& L, double atol) {
    SymmetryReport r;
    const QOperator Ad = adjoint(A);
    r.symmetric_defect = max_entry_distance(A, Ad);
    r.anti_symmetric_defect = max_entry_distance(A, -1.0 * Ad);
    r.is_symmetric = r.symmetric_defect <= atol;
    r.is_anti_symmetric = r.anti_symmetric_defect <= atol;
    const std::array<Quaternion, 3> units{Quaternion::i(), Quaternion::j(), Quaternion::k()};
    for (std::size_t u = 0; u < 3; ++u) {
        const QOperator eA = scalar_op(units[u], A, L, Side::left);
        r.unit_defect[u] = max_entry_distance(adjoint(eA), -1.0 * eA);
        r.unit_anti_symmetric[u] = r.unit_defect[u] <= atol;
    }
    return r;
}

QOperator scalar_op(const Quaternion& q, const QOperator& A, const LeftMul& L, Side side) {
    const QOperator Lq = left_scalar_matrix(L, q);
    return side == Side::left ? Lq * A : A * Lq;
}

QOperator resolvent_poly(const QOperator& A, const Quaternion& q) {
    const std::size_t n = A.dim();
    return A * A - (2.0 * q.real()) * A + q.norm2() * QOperator::identity(n);
}

double norm_identity_check(const QOperator& A, const LeftMul& L, const Quaternion& q,
                           std::size_t samples, std::uint64_t seed) {
    const std::size_t n = A.dim();
    const SymmetryReport sym = symmetry_predicates(A, L);
    const std::array<double, 3> parts{q.q1, q.q2, q.q3};
    for (std::size_t u = 0; u < 3; ++u) {
        if (parts[u] != 0.0 && !sym.unit_anti_symmetric[u]) {
            throw PreconditionFailed(std::string("unit ") + "ijk"[u] +
                                     " times A is not anti-symmetric");
        }
    }
    const QOperator Aq = shifted(A, L, q);
    const QOperator A0 = A - q.real() * QOperator::identity(n);
    const double im2 = q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3;
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const QVector phi = rng.unit_vector(n);
        const double lhs = (Aq * phi).norm2();
        const double rhs = (A0 * phi).norm2() + im2 * phi.norm2();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

CriteriaReport criteria_report(const QOperator& A, const LeftMul& L, const Quaternion& general_q,
                               double rank_tol) {
    const std::size_t n = A.dim();
    const SymmetryReport sym = symmetry_predicates(A, L);
    if (!sym.is_symmetric) {
        throw PreconditionFailed("criteria need a symmetric operator (defect " +
                                 std::to_string(sym.symmetric_defect) + ")");
    }
    CriteriaReport r;
    r.hypotheses_met = sym.unit_anti_symmetric[0];
    r.max_defect = sym.symmetric_defect;
    r.general_q = general_q;

    const QOperator Ad = adjoint(A);
    const auto trivial_kernels = [&](const Quaternion& q) {
        return kernel_q(shifted(Ad, L, q), rank_tol).qdim == 0 &&
               kernel_q(shifted(Ad, L, q.conj()), rank_tol).qdim == 0;
    };
    const auto full_ranges = [&](const Quaternion& q) {
        return rank_q(shifted(A, L, q), rank_tol) == n && rank_q(shifted(A, L, q.conj()), rank_tol) == n;
    };

    r.self_adjoint = sym.is_symmetric;
    r.kernels_trivial = trivial_kernels(Quaternion::i());
    r.ranges_full = full_ranges(Quaternion::i());

    r.general_self_adjoint = sym.is_symmetric;
    r.general_kernels_trivial = trivial_kernels(general_q);
    r.general_ranges_full = full_ranges(general_q);

    if (r.hypotheses_met && !r.agree()) {
        throw InternalInconsistency("self-adjointness criteria disagree for an operator meeting "
                                    "the hypotheses");
    }
    return r;
}

QOperator real_symmetric(Rng& rng, std::size_t dim) {
    QOperator A(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            const double v = rng.normal();
            A(r, c) = v;
            A(c, r) = v;
        }
    }
    return A;
}

QOperator real_symmetric(std::uint64_t seed, std::size_t dim) {
    Rng rng(seed);
    return real_symmetric(rng, dim);
}

QOperator hermitian_random(Rng& rng, std::size_t dim) {
    const QMatrix B = rng.matrix(dim, dim);
    QOperator H = 0.5 * (B + adjoint(B));
    // Force exact Hermitian symmetry (diagonal exactly real).
    for (std::size_t r = 0; r < dim; ++r) {
        H(r, r) = H(r, r).real();
        for (std::size_t c = r + 1; c < dim; ++c) H(c, r) = H(r, c).conj();
    }
    return H;
}

QOperator hermitian_random(std::uint64_t seed, std::size_t dim) {
    Rng rng(seed);
    return hermitian_random(rng, dim);
}

QOperator left_scalar(const Quaternion& q, std::size_t dim) {
    std::vector<Quaternion> diag(dim, q);
    return QOperator::diagonal(diag);
}

} // namespace qdef
