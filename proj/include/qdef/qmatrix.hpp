#pragma once

#include "qdef/quat.hpp"
#include "qdef/rmodule.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace qdef {

/// Dense quaternionic matrix, row-major. Entry (n, m) is <e_n|A e_m> in the
/// canonical basis, so a matrix acts on coordinate vectors with entries on the
/// left of the coordinates.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> row_major);

    static QMatrix identity(std::size_t n);
    static QMatrix diagonal(std::span<const Quaternion> diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    /// Dimension of a square matrix; throws DimensionMismatch otherwise.
    std::size_t dim() const;

    Quaternion& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Quaternion& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<Quaternion>& data() const { return data_; }

    QVector column(std::size_t c) const;
    void set_column(std::size_t c, const QVector& v);

    QMatrix& operator+=(const QMatrix& o);
    QMatrix& operator-=(const QMatrix& o);
    friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
    friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    /// Real scaling; real scalars commute with everything so the side is irrelevant.
    friend QMatrix operator*(double s, QMatrix a);
    friend QVector operator*(const QMatrix& a, const QVector& v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Quaternion> data_;
};

/// Square quaternionic matrices acting as right H-linear operators on H^n.
using QOperator = QMatrix;

/// Conjugate transpose.
QMatrix adjoint(const QMatrix& A);

/// Largest entrywise component distance.
double max_entry_distance(const QMatrix& A, const QMatrix& B);

/// Matrix of a right-linear map on H^n, read off its action on e_0..e_{n-1}.
QMatrix matrix_of(std::size_t dim, const std::function<QVector(const QVector&)>& op);

} // namespace qdef
