#include "qdef/quat.hpp"

#include "qdef/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace qdef {

double Quaternion::norm() const { return std::sqrt(norm2()); }

Quaternion Quaternion::inv() const {
    const double n2 = norm2();
    if (n2 == 0.0) {
        throw ZeroDivision("inverse of the zero quaternion");
    }
    return conj() / n2;
}

Quaternion& Quaternion::operator*=(const Quaternion& o) {
    *this = *this * o;
    return *this;
}

ConjNormInv conj_norm_inv(const Quaternion& q) { return {q.conj(), q.norm(), q.inv()}; }

double im_norm(const Quaternion& q) { return std::sqrt(q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3); }

double distance(const Quaternion& a, const Quaternion& b) {
    return std::max({std::abs(a.q0 - b.q0), std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2),
                     std::abs(a.q3 - b.q3)});
}

bool approx_equal(const Quaternion& a, const Quaternion& b, double atol) {
    return distance(a, b) <= atol;
}

ComplexPair to_pair(const Quaternion& q) { return {{q.q0, q.q3}, {q.q2, q.q1}}; }

Quaternion from_pair(const ComplexPair& p) {
    return {p.z1.real(), p.z2.imag(), p.z2.real(), p.z1.imag()};
}

QMat2C QMat2C::adjoint() const {
    QMat2C r;
    r(0, 0) = std::conj((*this)(0, 0));
    r(0, 1) = std::conj((*this)(1, 0));
    r(1, 0) = std::conj((*this)(0, 1));
    r(1, 1) = std::conj((*this)(1, 1));
    return r;
}

QMat2C operator*(const QMat2C& a, const QMat2C& b) {
    QMat2C r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        }
    }
    return r;
}

QMat2C embed2x2(const Quaternion& q) {
    const auto [z1, z2] = to_pair(q);
    QMat2C m;
    m(0, 0) = z1;
    m(0, 1) = -std::conj(z2);
    m(1, 0) = z2;
    m(1, 1) = std::conj(z1);
    return m;
}

Quaternion unembed2x2(const QMat2C& m) { return from_pair({m(0, 0), m(1, 0)}); }

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_literal(std::string_view text, const char* why) {
    throw ConfigParse("bad quaternion literal '" + std::string(text) + "': " + why);
}

} // namespace

Quaternion parse_quaternion(std::string_view text) {
    std::string compact;
    for (char c : trim(text)) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    }
    if (compact.empty()) bad_literal(text, "empty");

    Quaternion out;
    std::array<bool, 4> seen{};
    const char* p = compact.data();
    const char* end = p + compact.size();
    while (p < end) {
        double sign = 1.0;
        if (*p == '+' || *p == '-') {
            sign = (*p == '-') ? -1.0 : 1.0;
            ++p;
        } else if (p != compact.data()) {
            bad_literal(text, "missing sign between terms");
        }
        if (p == end) bad_literal(text, "dangling sign");

        double magnitude = 1.0;
        if (*p != 'i' && *p != 'j' && *p != 'k') {
            auto [next, ec] = std::from_chars(p, end, magnitude);
            if (ec != std::errc{}) bad_literal(text, "expected a number");
            p = next;
        }
        int slot = 0;
        if (p < end && (*p == 'i' || *p == 'j' || *p == 'k')) {
            slot = 1 + (*p - 'i');
            ++p;
        }
        if (seen[slot]) bad_literal(text, "repeated component");
        seen[slot] = true;
        const double v = sign * magnitude;
        switch (slot) {
        case 0: out.q0 = v; break;
        case 1: out.q1 = v; break;
        case 2: out.q2 = v; break;
        default: out.q3 = v; break;
        }
    }
    return out;
}

std::string to_string(const Quaternion& q) {
    const std::array<double, 4> parts{q.q0, q.q1, q.q2, q.q3};
    const char* units[4] = {"", "i", "j", "k"};
    std::string out;
    for (int s = 0; s < 4; ++s) {
        const double v = parts[s];
        if (v == 0.0) continue;
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        std::string num(buf, ptr);
        if (!out.empty() && num.front() != '-') out.push_back('+');
        out += num;
        out += units[s];
    }
    return out.empty() ? "0" : out;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) { return os << to_string(q); }

} // namespace qdef
