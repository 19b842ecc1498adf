#pragma once

#include "qdef/qmatrix.hpp"
#include "qdef/quat.hpp"
#include "qdef/rmodule.hpp"

#include <cstdint>
#include <random>

namespace qdef {

/// Seeded source for every sampled quantity. Equal seeds give equal streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
    std::size_t index(std::size_t lo, std::size_t hi_inclusive) {
        return lo + static_cast<std::size_t>(engine_() % (hi_inclusive - lo + 1));
    }

    Quaternion quaternion();
    Quaternion real_quaternion() { return Quaternion(normal()); }
    Quaternion unit_imaginary();
    /// Gaussian quaternion with a nonzero imaginary part bounded away from 0.
    Quaternion nonreal_quaternion(double min_im = 0.1);
    QVector vector(std::size_t dim);
    QVector unit_vector(std::size_t dim);
    QMatrix matrix(std::size_t rows, std::size_t cols);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Orthonormal basis obtained by Gram-Schmidt on Gaussian quaternionic vectors.
Basis random_unitary_basis(Rng& rng, std::size_t dim);
/// Orthonormal basis with real coordinates (a real orthogonal rotation of the canonical one).
Basis random_real_orthogonal_basis(Rng& rng, std::size_t dim);

} // namespace qdef
