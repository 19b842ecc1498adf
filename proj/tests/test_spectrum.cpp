#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "qdef/errors.hpp"
#include "qdef/spectrum.hpp"

using namespace qdef;

TEST_CASE("point spectrum of small matrices") {
    const SpectrumReport d = point_sspectrum(QMatrix::diagonal(std::vector<Quaternion>{1.0, 2.0}));
    REQUIRE(d.spheres.size() == 2);
    CHECK(d.spheres[0].re == doctest::Approx(1.0));
    CHECK(d.spheres[0].im_mag == 0.0);
    CHECK(d.spheres[1].re == doctest::Approx(2.0));
    CHECK(d.spheres[0].multiplicity == 1);
    CHECK(d.all_real);
    CHECK(d.spheres[0].kernel_verified);

    const SpectrumReport li = point_sspectrum(left_scalar(Quaternion::i(), 1));
    REQUIRE(li.spheres.size() == 1);
    CHECK(li.spheres[0].re == doctest::Approx(0.0));
    CHECK(li.spheres[0].im_mag == doctest::Approx(1.0));
    CHECK(li.spheres[0].kernel_verified);
    CHECK_FALSE(li.all_real);

    const QMatrix H(2, 2, {0.0, Quaternion::j(), -Quaternion::j(), 0.0});
    const SpectrumReport h = point_sspectrum(H);
    REQUIRE(h.spheres.size() == 2);
    CHECK(h.spheres[0].re == doctest::Approx(-1.0));
    CHECK(h.spheres[1].re == doctest::Approx(1.0));
    CHECK(h.all_real);

    const SpectrumReport z = point_sspectrum(QMatrix(3, 3));
    REQUIRE(z.spheres.size() == 1);
    CHECK(z.spheres[0].multiplicity == 3);
}

TEST_CASE("every point of a reported sphere is a right eigenvalue") {
    Rng rng(1);
    for (int t = 0; t < 10; ++t) {
        const QMatrix A = rng.matrix(4, 4);
        const SpectrumReport r = point_sspectrum(A);
        std::size_t total = 0;
        for (const auto& s : r.spheres) {
            total += s.multiplicity;
            CHECK(s.kernel_verified);
            // random point of the same sphere, checked through a differently built complex image
            const Quaternion u = rng.unit_imaginary();
            const Quaternion q = Quaternion(s.re) + u * s.im_mag;
            const int rank = oracle::qrank(resolvent_poly(A, q), 1e-7);
            CHECK(rank < 4);
        }
        CHECK(total == 4);
    }
}

TEST_CASE("self-adjoint iff real spectrum") {
    const LeftMul L3 = LeftMul::canonical(3);
    const SelfAdjointVerdict r = selfadjoint_iff_real(real_symmetric(2, 3), L3, true);
    CHECK(r.self_adjoint);
    CHECK(r.all_real);
    CHECK(r.consistent);

    const LeftMul L1 = LeftMul::canonical(1);
    CHECK_THROWS_AS(selfadjoint_iff_real(left_scalar(Quaternion::i(), 1), L1, true), PreconditionFailed);
    const SelfAdjointVerdict f = selfadjoint_iff_real(left_scalar(Quaternion::i(), 1), L1);
    CHECK_FALSE(f.self_adjoint);
    CHECK_FALSE(f.all_real);
    CHECK(f.consistent);

    const SelfAdjointVerdict z = selfadjoint_iff_real(QMatrix(2, 2), LeftMul::canonical(2), true);
    CHECK(z.self_adjoint);
    CHECK(z.all_real);

    for (std::uint64_t s = 0; s < 20; ++s) {
        const SelfAdjointVerdict h = selfadjoint_iff_real(hermitian_random(s, 5), LeftMul::canonical(5));
        CHECK(h.all_real);
        CHECK(h.consistent);
    }
}

TEST_CASE("resolvent bound") {
    const QMatrix D = QMatrix::diagonal(std::vector<Quaternion>{1.0, 2.0});
    const ResolventBound b = resolvent_bound_check(D, Quaternion::i(), 20, 1);
    CHECK(b.bound == doctest::Approx(1.0));
    CHECK(b.inverse_norm == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.max_violation() <= 1e-8);

    const ResolventBound b2 = resolvent_bound_check(D, Quaternion(0, 2, 0, 0), 20, 1);
    CHECK(b2.bound == doctest::Approx(0.25));
    CHECK(b2.inverse_norm == doctest::Approx(0.2).epsilon(1e-12));

    CHECK_THROWS_AS(resolvent_bound_check(D, 3.0, 5, 1), PreconditionFailed);

    Rng rng(4);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const QMatrix H = hermitian_random(s, 4);
        const Quaternion q = rng.nonreal_quaternion();
        const ResolventBound r = resolvent_bound_check(H, q, 10, s);
        CHECK(r.inverse_norm <= r.bound + 1e-8);
        CHECK(r.max_violation() <= 1e-8);
    }
}

TEST_CASE("csv") {
    const std::string csv = spheres_csv(point_sspectrum(QMatrix::diagonal(std::vector<Quaternion>{1.0, 2.0})));
    CHECK(csv == "re,im_mag,mult\n1,0,1\n2,0,1\n");
}
