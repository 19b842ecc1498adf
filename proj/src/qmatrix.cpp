#include "qdef/qmatrix.hpp"

#include "qdef/errors.hpp"

#include <algorithm>

namespace qdef {

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows * cols) throw DimensionMismatch(rows * cols, data_.size());
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
    return m;
}

QMatrix QMatrix::diagonal(std::span<const Quaternion> diag) {
    QMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) m(k, k) = diag[k];
    return m;
}

std::size_t QMatrix::dim() const {
    if (!square()) throw DimensionMismatch(rows_, cols_);
    return rows_;
}

QVector QMatrix::column(std::size_t c) const {
    QVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void QMatrix::set_column(std::size_t c, const QVector& v) {
    if (v.dim() != rows_) throw DimensionMismatch(rows_, v.dim());
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch(data_.size(), o.data_.size());
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch(data_.size(), o.data_.size());
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch(a.cols_, b.rows_);
    QMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t m = 0; m < a.cols_; ++m) {
            const Quaternion& arm = a(r, m);
            for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += arm * b(m, c);
        }
    }
    return out;
}

QMatrix operator*(double s, QMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
}

QVector operator*(const QMatrix& a, const QVector& v) {
    if (a.cols_ != v.dim()) throw DimensionMismatch(a.cols_, v.dim());
    QVector out(a.rows_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        Quaternion s;
        for (std::size_t m = 0; m < a.cols_; ++m) s += a(r, m) * v[m];
        out[r] = s;
    }
    return out;
}

QMatrix adjoint(const QMatrix& A) {
    QMatrix out(A.cols(), A.rows());
    for (std::size_t r = 0; r < A.rows(); ++r) {
        for (std::size_t c = 0; c < A.cols(); ++c) out(c, r) = A(r, c).conj();
    }
    return out;
}

double max_entry_distance(const QMatrix& A, const QMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        throw DimensionMismatch(A.data().size(), B.data().size());
    }
    double d = 0.0;
    for (std::size_t k = 0; k < A.data().size(); ++k) d = std::max(d, distance(A.data()[k], B.data()[k]));
    return d;
}

QMatrix matrix_of(std::size_t dim, const std::function<QVector(const QVector&)>& op) {
    QMatrix m(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) m.set_column(c, op(QVector::unit(dim, c)));
    return m;
}

} // namespace qdef
