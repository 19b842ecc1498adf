#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qdef {

using cplx = std::complex<double>;

inline constexpr double kDefaultAtol = 1e-12;

/// Real quaternion q0 + i q1 + j q2 + k q3.
struct Quaternion {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double r) : q0(r) {}
    constexpr Quaternion(double a, double b, double c, double d) : q0(a), q1(b), q2(c), q3(d) {}

    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    constexpr double real() const { return q0; }
    constexpr Quaternion imag() const { return {0, q1, q2, q3}; }

    constexpr Quaternion conj() const { return {q0, -q1, -q2, -q3}; }
    constexpr double norm2() const { return q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3; }
    double norm() const;
    /// Throws ZeroDivision for the zero quaternion.
    Quaternion inv() const;

    constexpr Quaternion operator-() const { return {-q0, -q1, -q2, -q3}; }
    Quaternion& operator+=(const Quaternion& o) {
        q0 += o.q0; q1 += o.q1; q2 += o.q2; q3 += o.q3;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& o) {
        q0 -= o.q0; q1 -= o.q1; q2 -= o.q2; q3 -= o.q3;
        return *this;
    }
    Quaternion& operator*=(const Quaternion& o);
    Quaternion& operator*=(double s) {
        q0 *= s; q1 *= s; q2 *= s; q3 *= s;
        return *this;
    }

    friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) {
        return {a.q0 + b.q0, a.q1 + b.q1, a.q2 + b.q2, a.q3 + b.q3};
    }
    friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) {
        return {a.q0 - b.q0, a.q1 - b.q1, a.q2 - b.q2, a.q3 - b.q3};
    }
    // Hamilton product with the unit table i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
    friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
                a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
                a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
                a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0};
    }
    friend constexpr Quaternion operator*(const Quaternion& a, double s) {
        return {a.q0 * s, a.q1 * s, a.q2 * s, a.q3 * s};
    }
    friend constexpr Quaternion operator*(double s, const Quaternion& a) { return a * s; }
    friend constexpr Quaternion operator/(const Quaternion& a, double s) {
        return {a.q0 / s, a.q1 / s, a.q2 / s, a.q3 / s};
    }

    // Exact component equality; use approx_equal for numerical comparisons.
    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline Quaternion mul(const Quaternion& a, const Quaternion& b) { return a * b; }

struct ConjNormInv {
    Quaternion conj;
    double norm;
    Quaternion inv;
};

ConjNormInv conj_norm_inv(const Quaternion& q);

/// sqrt(q1^2 + q2^2 + q3^2); zero exactly when q is real.
double im_norm(const Quaternion& q);

/// Max-component distance.
double distance(const Quaternion& a, const Quaternion& b);
bool approx_equal(const Quaternion& a, const Quaternion& b, double atol = kDefaultAtol);

// z1 = q0 + i q3, z2 = q2 + i q1.
struct ComplexPair {
    cplx z1;
    cplx z2;
};

ComplexPair to_pair(const Quaternion& q);
Quaternion from_pair(const ComplexPair& p);

/// 2x2 complex image [[z1, -conj(z2)], [z2, conj(z1)]], row-major.
struct QMat2C {
    std::array<cplx, 4> m{};

    cplx& operator()(int r, int c) { return m[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
    QMat2C adjoint() const;
    friend QMat2C operator*(const QMat2C& a, const QMat2C& b);
};

QMat2C embed2x2(const Quaternion& q);
/// Inverse of embed2x2 on its image; reads z1, z2 off the first column.
Quaternion unembed2x2(const QMat2C& m);

/// Parses literals such as "1-2i+0.5k", "-j", "3e-4+2.5i". Throws ConfigParse.
Quaternion parse_quaternion(std::string_view text);
/// Shortest literal that parses back to the same bits.
std::string to_string(const Quaternion& q);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

} // namespace qdef
