#include "qdef/random.hpp"

#include <cmath>

namespace qdef {

Quaternion Rng::quaternion() {
    const double a = normal();
    const double b = normal();
    const double c = normal();
    const double d = normal();
    return {a, b, c, d};
}

Quaternion Rng::unit_imaginary() {
    for (;;) {
        const double b = normal();
        const double c = normal();
        const double d = normal();
        const double n = std::sqrt(b * b + c * c + d * d);
        if (n > 1e-6) return {0.0, b / n, c / n, d / n};
    }
}

Quaternion Rng::nonreal_quaternion(double min_im) {
    for (;;) {
        const Quaternion q = quaternion();
        if (im_norm(q) >= min_im) return q;
    }
}

QVector Rng::vector(std::size_t dim) {
    QVector v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = quaternion();
    return v;
}

QVector Rng::unit_vector(std::size_t dim) {
    for (;;) {
        QVector v = vector(dim);
        const double n = v.norm();
        if (n > 1e-6) return v * (1.0 / n);
    }
}

QMatrix Rng::matrix(std::size_t rows, std::size_t cols) {
    QMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = quaternion();
    }
    return m;
}

Basis random_unitary_basis(Rng& rng, std::size_t dim) {
    std::vector<QVector> vs;
    vs.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) vs.push_back(rng.vector(dim));
    return gram_schmidt(vs, "random_unitary");
}

Basis random_real_orthogonal_basis(Rng& rng, std::size_t dim) {
    std::vector<QVector> vs;
    vs.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        QVector v(dim);
        for (std::size_t c = 0; c < dim; ++c) v[c] = rng.normal();
        vs.push_back(std::move(v));
    }
    return gram_schmidt(vs, "random_real_orthogonal");
}

} // namespace qdef
