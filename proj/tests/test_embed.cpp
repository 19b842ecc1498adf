#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "qdef/embed.hpp"
#include "qdef/errors.hpp"
#include "qdef/qoperator.hpp"
#include "qdef/random.hpp"

#include <algorithm>

using namespace qdef;
using C = std::complex<double>;

namespace {

std::vector<C> sorted_eigs(const Eigen::MatrixXcd& M) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    std::vector<C> ev(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(ev.begin(), ev.end(), [](C a, C b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

} // namespace

TEST_CASE("chi on small matrices") {
    const ChiMatrix ci = chi(QMatrix(1, 1, {Quaternion::i()}));
    CHECK(ci.m(0, 0) == C(0, 0));
    CHECK(ci.m(0, 1) == C(0, 1));
    CHECK(ci.m(1, 0) == C(0, 1));
    CHECK(ci.m(1, 1) == C(0, 0));
    CHECK(chi(QMatrix::identity(3)).m.isIdentity(0.0));
}

TEST_CASE("chi is a homomorphism and tracks vectors") {
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        const QMatrix A = rng.matrix(3, 3);
        const QMatrix B = rng.matrix(3, 3);
        CHECK(oracle::max_abs(chi(A * B).m - chi(A).m * chi(B).m) <= 1e-12);
        CHECK(oracle::max_abs(chi(adjoint(A)).m - chi(A).m.adjoint()) == 0.0);
        const QVector v = rng.vector(3);
        CHECK((chi(A).m * to_complex(v) - to_complex(A * v)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(oracle::vdist(from_complex(to_complex(v)), v) == 0.0);
        const Eigen::VectorXcd jv = to_complex(v * Quaternion::j());
        CHECK((structure_j(to_complex(v)) - jv).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("kernel dimension") {
    CHECK(kernel_q(QMatrix(3, 3)).qdim == 3);
    CHECK(kernel_q(real_symmetric(2, 4) + 20.0 * QMatrix::identity(4)).qdim == 0);

    // (i.)^2 + 1 vanishes on H^1
    const QMatrix li = left_scalar(Quaternion::i(), 1);
    const KernelBasis k = kernel_q(li * li + QMatrix::identity(1));
    CHECK(k.qdim == 1);

    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = rng.index(2, 7);
        QMatrix A = rng.matrix(n, n);
        // force dependencies: column c = column a * p + column b * r
        const std::size_t deps = rng.index(0, n - 1);
        for (std::size_t d = 0; d < deps; ++d) {
            const std::size_t a = rng.index(0, n - 1);
            const std::size_t c = rng.index(0, n - 1);
            if (a != c) A.set_column(c, A.column(a) * rng.quaternion());
        }
        const KernelBasis K = kernel_q(A);
        CHECK(K.qdim == n - static_cast<std::size_t>(oracle::qrank(A)));
        CHECK(K.vectors.size() == K.qdim);
        for (const auto& v : K.vectors) CHECK((A * v).norm() <= 1e-9 * operator_norm(A));
        for (std::size_t a = 0; a < K.vectors.size(); ++a)
            for (std::size_t b = 0; b < K.vectors.size(); ++b)
                CHECK(distance(inner(K.vectors[a], K.vectors[b]), Quaternion(a == b ? 1.0 : 0.0)) <= 1e-9);
    }
}

TEST_CASE("rank") {
    CHECK(rank_q(QMatrix::identity(4)) == 4);
    QMatrix P(3, 3);
    P(0, 0) = 1.0;
    CHECK(rank_q(P) == 1);

    Rng rng(3);
    QMatrix A = rng.matrix(5, 5);
    A.set_column(3, A.column(0) * Quaternion(1, 2, 0, -1) + A.column(1) * Quaternion(0, 0, 3, 1));
    A.set_column(4, A.column(2) * Quaternion::k());
    CHECK(rank_q(A) == 3);
    CHECK(rank_q(A) == static_cast<std::size_t>(oracle::qrank(A)));

    QMatrix B = rng.matrix(5, 5);
    B.set_column(4, B.column(0) * Quaternion(0.5, -1, 1, 2));
    CHECK(rank_q(B) == 4);
    CHECK(rank_q(rng.matrix(3, 5)) == 3);
}

TEST_CASE("complex eigenvalues") {
    const auto d = eigenvalues_c(QMatrix::diagonal(std::vector<Quaternion>{1.0, 2.0}));
    REQUIRE(d.size() == 4);
    CHECK(std::abs(d[0] - 1.0) <= 1e-14);
    CHECK(std::abs(d[1] - 1.0) <= 1e-14);
    CHECK(std::abs(d[2] - 2.0) <= 1e-14);
    CHECK(std::abs(d[3] - 2.0) <= 1e-14);

    const auto li = eigenvalues_c(left_scalar(Quaternion::i(), 1));
    REQUIRE(li.size() == 2);
    CHECK(std::abs(li[0] - C(0, -1)) <= 1e-14);
    CHECK(std::abs(li[1] - C(0, 1)) <= 1e-14);

    const QMatrix H(2, 2, {0.0, Quaternion::j(), -Quaternion::j(), 0.0});
    const auto h = eigenvalues_c(H);
    REQUIRE(h.size() == 4);
    CHECK(std::abs(h[0] + 1.0) <= 1e-12);
    CHECK(std::abs(h[1] + 1.0) <= 1e-12);
    CHECK(std::abs(h[2] - 1.0) <= 1e-12);
    CHECK(std::abs(h[3] - 1.0) <= 1e-12);

    // agreement with a differently arranged complex image
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const QMatrix A = rng.matrix(4, 4);
        const auto a = eigenvalues_c(A);
        const auto b = sorted_eigs(oracle::complexify(A));
        // conjugate pairs make both lists closed under conjugation; compare as multisets
        for (const C& z : a) {
            double best = 1e9;
            for (const C& w : b) best = std::min(best, std::abs(z - w));
            CHECK(best <= 1e-9);
        }
    }
}

TEST_CASE("solve and norms") {
    Rng rng(5);
    const QMatrix A = rng.matrix(4, 4);
    const QVector b = rng.vector(4);
    const QVector x = solve_q(A, b);
    CHECK((A * x - b).norm() <= 1e-10 * (1 + b.norm()));
    CHECK_THROWS_AS(solve_q(QMatrix(2, 2), QVector(2)), SingularSystem);

    const auto sv = singular_values_c(A);
    REQUIRE(sv.size() == 8);
    for (std::size_t k = 0; k + 1 < sv.size(); k += 2) CHECK(std::abs(sv[k] - sv[k + 1]) <= 1e-10 * sv[0]);
    CHECK(operator_norm(A) == doctest::Approx(sv[0]));
    for (int t = 0; t < 20; ++t) {
        const QVector v = rng.unit_vector(4);
        CHECK((A * v).norm() <= operator_norm(A) * (1 + 1e-12));
    }
    CHECK(min_hermitian_eigenvalue(QMatrix::identity(3)) == doctest::Approx(1.0));
    const QMatrix G = gram({QVector{1.0, 0.0}, QVector{Quaternion::j(), 0.0}});
    CHECK(G(0, 1) == Quaternion::j());
    CHECK(min_hermitian_eigenvalue(G) == doctest::Approx(0.0).epsilon(1e-12));
}
