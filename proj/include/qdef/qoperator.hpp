#pragma once

#include "qdef/embed.hpp"
#include "qdef/qmatrix.hpp"
#include "qdef/random.hpp"
#include "qdef/rmodule.hpp"

#include <array>
#include <cstdint>

namespace qdef {

inline constexpr double kSymmetryTol = 1e-10;

QVector apply(const QOperator& A, const QVector& phi);

/// Matrix of phi -> q.phi for the given left multiplication.
QOperator left_scalar_matrix(const LeftMul& L, const Quaternion& q);

/// A - q I, where q I is the left-scalar operator of L.
QOperator shifted(const QOperator& A, const LeftMul& L, const Quaternion& q);

struct SymmetryReport {
    bool is_symmetric = false;
    bool is_anti_symmetric = false;
    /// Anti-symmetry of iA, jA, kA, in that order.
    std::array<bool, 3> unit_anti_symmetric{};
    double symmetric_defect = 0.0;
    double anti_symmetric_defect = 0.0;
    std::array<double, 3> unit_defect{};

    bool units_anti_symmetric() const {
        return unit_anti_symmetric[0] && unit_anti_symmetric[1] && unit_anti_symmetric[2];
    }
};

SymmetryReport symmetry_predicates(const QOperator& A, const LeftMul& L, double atol = kSymmetryTol);

enum class Side { left, right };

/// left: (qA) phi = q.(A phi); right: (Aq) phi = A (q.phi).
QOperator scalar_op(const Quaternion& q, const QOperator& A, const LeftMul& L, Side side);

/// A^2 - 2 Re(q) A + |q|^2 I.
QOperator resolvent_poly(const QOperator& A, const Quaternion& q);

/// Max over random unit phi of
/// | ||(A - qI)phi||^2 - ||(A - q0 I)phi||^2 - |Im q|^2 ||phi||^2 |.
/// Requires eA anti-symmetric for every unit e with a nonzero component in q;
/// throws PreconditionFailed otherwise.
double norm_identity_check(const QOperator& A, const LeftMul& L, const Quaternion& q,
                           std::size_t samples, std::uint64_t seed);

struct CriteriaReport {
    bool self_adjoint = false;    // A = A^dagger
    bool kernels_trivial = false; // ker(A^dagger +- iI) = {0}
    bool ranges_full = false;     // ran(A +- iI) = whole space
    /// Same three conditions with i replaced by a general nonreal q.
    bool general_self_adjoint = false;
    bool general_kernels_trivial = false;
    bool general_ranges_full = false;
    Quaternion general_q;
    /// iA anti-symmetric (the hypothesis under which the equivalence is a theorem).
    bool hypotheses_met = false;
    double max_defect = 0.0;

    bool agree() const {
        return self_adjoint == kernels_trivial && kernels_trivial == ranges_full &&
               general_self_adjoint == general_kernels_trivial &&
               general_kernels_trivial == general_ranges_full;
    }
};

/// Requires A symmetric (PreconditionFailed). When iA is anti-symmetric the
/// three conditions must agree, else InternalInconsistency.
CriteriaReport criteria_report(const QOperator& A, const LeftMul& L,
                               const Quaternion& general_q = Quaternion(1, 1, 1, 1),
                               double rank_tol = kDefaultRankTol);

/// Real entries, transpose-symmetric, Gaussian.
QOperator real_symmetric(std::uint64_t seed, std::size_t dim);
QOperator real_symmetric(Rng& rng, std::size_t dim);
/// (B + B^dagger) / 2 for a Gaussian quaternionic B.
QOperator hermitian_random(std::uint64_t seed, std::size_t dim);
QOperator hermitian_random(Rng& rng, std::size_t dim);
/// q I on H^dim in the canonical basis.
QOperator left_scalar(const Quaternion& q, std::size_t dim = 1);

} // namespace qdef
