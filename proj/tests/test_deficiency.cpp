#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "qdef/deficiency.hpp"
#include "qdef/errors.hpp"

#include <cmath>

using namespace qdef;

namespace {

const Quaternion I = Quaternion::i();

// Leading M x M block of A^dagger - q (canonical left scalar) with the last w
// rows dropped, filled from the entry formula directly.
QMatrix oracle_truncation(const BandedOperator& A, const Quaternion& q, std::size_t M) {
    const int w = static_cast<int>(A.bandwidth());
    QMatrix T(M - w, M);
    for (std::size_t n = 0; n + w < M; ++n) {
        for (int d = -w; d <= w; ++d) {
            const long long m = static_cast<long long>(n) + d;
            if (m < 0 || m >= static_cast<long long>(M)) continue;
            // (A^dagger)_{n,m} = conj(A_{m,n})
            T(n, m) = A.coeff(static_cast<std::size_t>(m), -d).conj();
        }
        T(n, n) = T(n, n) - q;
    }
    return T;
}

std::size_t oracle_kernel_qdim(const BandedOperator& A, const Quaternion& q, std::size_t M) {
    return M - static_cast<std::size_t>(oracle::qrank(oracle_truncation(A, q, M), 1e-10));
}

Quaternion value(const FormalSolution& s, std::size_t n) { return s.scaled_value(n, 0.0); }

} // namespace

TEST_CASE("banded operator entries") {
    const BandedOperator j = BandedOperator::jacobi_sq();
    CHECK(j.coeff(0, 1) == Quaternion(1.0));
    CHECK(j.coeff(3, 1) == Quaternion(16.0));
    CHECK(j.coeff(4, -1) == Quaternion(16.0));
    CHECK(j.coeff(0, -1) == Quaternion());
    CHECK(j.symmetric());
    CHECK(j.real_entries());
    CHECK(BandedOperator::number_operator().coeff(7, 0) == Quaternion(7.0));

    const QMatrix T = j.truncate(5);
    CHECK(max_entry_distance(T, adjoint(T)) == 0.0);
    CHECK(max_entry_distance(j.truncate_adjoint(5), adjoint(T)) == 0.0);

    CHECK_THROWS_AS(BandedOperator::preset("nope"), ConfigParse);
    CHECK_THROWS_AS(BandedOperator(1, {{2, {1.0}}}, "wide"), PreconditionFailed);

    const BandedOperator skew(1, {{1, {1.0}}, {-1, {2.0}}}, "skew");
    CHECK_FALSE(skew.symmetric());
    CHECK_THROWS_AS(deficiency_indices(skew, 'i'), PreconditionFailed);
}

TEST_CASE("formal solutions") {
    CHECK(formal_solutions(BandedOperator::number_operator(), I, 2000).empty());
    const auto diag_hit = formal_solutions(BandedOperator::number_operator(), 3.0, 100);
    REQUIRE(diag_hit.size() == 1);
    CHECK(diag_hit[0].seed_slot == 3);

    const auto fj = formal_solutions(BandedOperator::free_jacobi(), I, 2000);
    REQUIRE(fj.size() == 1);
    CHECK(value(fj[0], 0) == Quaternion(1.0));
    CHECK(approx_equal(value(fj[0], 1), I));
    for (std::size_t n = 1; n < 30; ++n) {
        const Quaternion next = I * value(fj[0], n) - value(fj[0], n - 1);
        CHECK(distance(value(fj[0], n + 1), next) <= 1e-12 * (1 + next.norm()));
    }
    CHECK(fj[0].recurrence_residual <= 1e-10);
    CHECK(fj[0].precision_discrepancy <= 1e-6);

    const auto js = formal_solutions(BandedOperator::jacobi_sq(), I, 2000);
    REQUIRE(js.size() == 1);
    CHECK(js[0].log_abs2(1999) < js[0].log_abs2(10));

    CHECK_THROWS_AS(formal_solutions(BandedOperator::jacobi_sq(), I, 5), PreconditionFailed);
    const BandedOperator gap(1, {{1, {0.0, 1.0}}, {-1, {-1.0, 1.0}}}, "gap");
    CHECK(gap.symmetric());
    CHECK_THROWS_AS(formal_solutions(gap, I, 100), SingularLeadingCoefficient);
}

TEST_CASE("formal solutions agree with the truncated-matrix oracle") {
    for (const char* name : {"number_operator", "free_jacobi", "jacobi_sq"}) {
        const BandedOperator A = BandedOperator::preset(name);
        for (const Quaternion& q : {I, -I, Quaternion(1, 1, 1, 0), Quaternion(0, 0, 2, 0)}) {
            const auto sols = formal_solutions(A, q, 60);
            CHECK(sols.size() == oracle_kernel_qdim(A, q, 60));
            CHECK(truncated_kernel_qdim(A, q, 60) == oracle_kernel_qdim(A, q, 60));
        }
    }
    // the recurrence vector lies in the oracle kernel
    const BandedOperator A = BandedOperator::free_jacobi();
    const auto sol = formal_solutions(A, I, 60);
    QVector v(60);
    for (std::size_t n = 0; n < 60; ++n) v[n] = value(sol[0], n);
    CHECK((oracle_truncation(A, I, 60) * v).norm() <= 1e-10 * v.norm());
}

TEST_CASE("summability classification") {
    DeficiencyOptions opt;
    std::vector<Quaternion> halves(2000), ones(2000, Quaternion(1.0));
    for (std::size_t n = 0; n < 2000; ++n) halves[n] = std::pow(2.0, -static_cast<double>(n) / 20.0);
    CHECK(classify_l2(make_solution(halves), 100, opt).verdict == Summability::square_summable);
    CHECK(classify_l2(make_solution(ones), 100, opt).verdict == Summability::divergent);

    std::vector<Quaternion> inv(2000), inv_sqrt(2000), inv_quarter(2000);
    for (std::size_t n = 0; n < 2000; ++n) {
        inv[n] = 1.0 / (n + 1.0);
        inv_sqrt[n] = 1.0 / std::sqrt(n + 1.0);
        inv_quarter[n] = std::pow(n + 1.0, -0.25);
    }
    CHECK(classify_l2(make_solution(inv), 100, opt).verdict == Summability::square_summable);
    CHECK(classify_l2(make_solution(inv_quarter), 100, opt).verdict == Summability::divergent);
    // harmonic energies sit on the boundary and are never guessed
    CHECK(classify_l2(make_solution(inv_sqrt), 100, opt).verdict == Summability::inconclusive);
    CHECK(classify_l2(make_solution(std::vector<Quaternion>(200, 1.0)), 100, opt).verdict ==
          Summability::inconclusive);

    const BandedOperator fj = BandedOperator::free_jacobi();
    for (std::size_t N : {2000u, 4000u}) {
        const auto s = formal_solutions(fj, I, N);
        CHECK(classify_l2(s[0], 100, opt).verdict == Summability::divergent);
    }
    const auto js = formal_solutions(BandedOperator::jacobi_sq(), I, 2000);
    CHECK(classify_l2(js[0], 100, opt).verdict == Summability::square_summable);
}

TEST_CASE("deficiency indices of the presets") {
    const auto expect = [](const char* name, std::size_t n) {
        for (char u : {'i', 'j', 'k'}) {
            const DeficiencyReport r = deficiency_indices(BandedOperator::preset(name), u);
            CHECK(r.status == DeficiencyStatus::ok);
            CHECK(r.doubling_agrees);
            CHECK(r.n_plus == n);
            CHECK(r.n_minus == n);
            CHECK(r.self_adjoint == (n == 0));
            CHECK_FALSE(r.hypotheses_unmet);
        }
    };
    expect("number_operator", 0);
    expect("free_jacobi", 0);
    expect("jacobi_sq", 1);
    CHECK_THROWS_AS(deficiency_indices(BandedOperator::jacobi_sq(), 'x'), PreconditionFailed);
}

TEST_CASE("stability scan") {
    const DeficiencyOptions opt;
    const StabilityRecord n = index_stability_scan(BandedOperator::number_operator(), I, 20, opt, 1);
    CHECK(n.all_equal);
    CHECK(n.value == 0);
    CHECK(n.entries.size() == 20);
    const StabilityRecord j = index_stability_scan(BandedOperator::jacobi_sq(), I, 20, opt, 1);
    CHECK(j.all_equal);
    CHECK(j.value == 1);
    for (const auto& e : j.entries) CHECK(im_norm(e.q) > 0.0);
    CHECK_THROWS_AS(index_stability_scan(BandedOperator::jacobi_sq(), 5.0, 20, opt, 1), PreconditionFailed);
}

TEST_CASE("von Neumann directness") {
    const QMatrix S = real_symmetric(1, 5);
    const DirectnessRecord f = von_neumann_evidence(S, LeftMul::canonical(5), I);
    CHECK(f.trivial);
    CHECK(f.k_plus == 0);

    const BandedOperator J = BandedOperator::jacobi_sq();
    const DirectnessRecord r = von_neumann_evidence(J, I);
    CHECK(r.k_plus == 1);
    CHECK(r.k_minus == 1);
    CHECK(r.direct);
    CHECK(r.gram_min_eigenvalue > 1e-8);

    const DeficiencyOptions opt;
    CHECK(summable_kernel_dim(J, 2.0 * I, opt).dim == summable_kernel_dim(J, I, opt).dim);
    CHECK(summable_kernel_dim(J, 2.0 * I, opt).dim == summable_kernel_dim(J.scaled(0.5), I, opt).dim);
}

TEST_CASE("finite deficiency indices") {
    const LeftMul L = LeftMul::canonical(4);
    const auto [np, nm] = finite_deficiency_indices(real_symmetric(2, 4), L, 'j');
    CHECK(np == 0);
    CHECK(nm == 0);
}

TEST_CASE("basis invariance") {
    const QMatrix A = real_symmetric(3, 6);
    const Quaternion q(1, 1, -1, 0);
    CHECK(basis_invariance_check(A, Basis::canonical(6), q, 5, 1) == 0);
    Rng rng(4);
    CHECK(basis_invariance_check(A, random_unitary_basis(rng, 6), q, 1, 1) == 0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = rng.index(2, 7);
        CHECK(basis_invariance_check(real_symmetric(s, n), random_unitary_basis(rng, n),
                                     rng.nonreal_quaternion(), 1, s) == 0);
    }
    CHECK_THROWS_AS(basis_invariance_check(hermitian_random(1, 3), Basis::canonical(3), q, 1, 1),
                    PreconditionFailed);
    CHECK_THROWS_AS(basis_invariance_check(A, Basis::canonical(6), 2.0, 1, 1), PreconditionFailed);
}
