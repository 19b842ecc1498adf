#include "qdef/embed.hpp"

#include "qdef/errors.hpp"

#include <algorithm>

namespace qdef {

ChiMatrix chi(const QMatrix& A) {
    ChiMatrix out;
    out.source_rows = A.rows();
    out.source_cols = A.cols();
    out.m = Eigen::MatrixXcd::Zero(2 * A.rows(), 2 * A.cols());
    for (std::size_t r = 0; r < A.rows(); ++r) {
        for (std::size_t c = 0; c < A.cols(); ++c) {
            const QMat2C b = embed2x2(A(r, c));
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) out.m(2 * r + i, 2 * c + j) = b(i, j);
            }
        }
    }
    return out;
}

Eigen::VectorXcd to_complex(const QVector& v) {
    Eigen::VectorXcd x(2 * v.dim());
    for (std::size_t k = 0; k < v.dim(); ++k) {
        const auto [z1, z2] = to_pair(v[k]);
        x(2 * k) = z1;
        x(2 * k + 1) = z2;
    }
    return x;
}

QVector from_complex(const Eigen::VectorXcd& x) {
    QVector v(static_cast<std::size_t>(x.size() / 2));
    for (std::size_t k = 0; k < v.dim(); ++k) v[k] = from_pair({x(2 * k), x(2 * k + 1)});
    return v;
}

Eigen::VectorXcd structure_j(const Eigen::VectorXcd& x) {
    // Second column of embed2x2: (-conj(z2), conj(z1)).
    Eigen::VectorXcd y(x.size());
    for (Eigen::Index k = 0; k + 1 < x.size(); k += 2) {
        y(k) = -std::conj(x(k + 1));
        y(k + 1) = std::conj(x(k));
    }
    return y;
}

namespace {

struct Svd {
    Eigen::VectorXd sigma;
    Eigen::MatrixXcd v;
};

Svd full_svd(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    return {svd.singularValues(), svd.matrixV()};
}

std::size_t complex_rank(const Eigen::VectorXd& sigma, double rank_tol) {
    if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
    const double cut = rank_tol * sigma(0);
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma(k) > cut) ++r;
    }
    return r;
}

void orthogonalize_against(Eigen::VectorXcd& x, const std::vector<Eigen::VectorXcd>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) x -= b * b.dot(x);
    }
}

} // namespace

KernelBasis kernel_q(const QMatrix& A, double rank_tol) {
    KernelBasis out;
    const std::size_t n = A.cols();
    if (n == 0) return out;
    if (A.rows() == 0) {
        for (std::size_t k = 0; k < n; ++k) out.vectors.push_back(QVector::unit(n, k));
        out.qdim = n;
        return out;
    }
    const ChiMatrix c = chi(A);
    const Svd svd = full_svd(c.m);
    const std::size_t rank = complex_rank(svd.sigma, rank_tol);
    const std::size_t nullity = 2 * n - rank;
    if (nullity % 2 != 0) {
        throw InternalInconsistency("complex nullity " + std::to_string(nullity) +
                                    " of the adjoint representation is odd");
    }
    out.qdim = nullity / 2;

    // Complex null space, then pair each direction x with J x.
    std::vector<Eigen::VectorXcd> pool;
    for (std::size_t k = rank; k < 2 * n; ++k) pool.push_back(svd.v.col(static_cast<Eigen::Index>(k)));

    std::vector<Eigen::VectorXcd> chosen;
    while (out.vectors.size() < out.qdim) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            Eigen::VectorXcd y = pool[k];
            orthogonalize_against(y, chosen);
            if (y.norm() > best_norm) {
                best_norm = y.norm();
                best = k;
            }
        }
        Eigen::VectorXcd x = pool[best];
        orthogonalize_against(x, chosen);
        if (!(x.norm() > 1e-8)) {
            throw InternalInconsistency("null space lost its J-invariant structure");
        }
        x.normalize();
        chosen.push_back(x);
        Eigen::VectorXcd jx = structure_j(x);
        orthogonalize_against(jx, chosen);
        jx.normalize();
        chosen.push_back(jx);
        out.vectors.push_back(from_complex(x));
    }
    return out;
}

std::size_t rank_q(const QMatrix& A, double rank_tol) { return A.cols() - kernel_q(A, rank_tol).qdim; }

std::vector<double> singular_values_c(const QMatrix& A) {
    if (A.rows() == 0 || A.cols() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(chi(A).m);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

double operator_norm(const QMatrix& A) {
    const auto s = singular_values_c(A);
    return s.empty() ? 0.0 : s.front();
}

std::vector<std::complex<double>> eigenvalues_c(const QMatrix& A) {
    const std::size_t n = A.dim();
    if (n == 0) return {};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(chi(A).m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("complex eigensolver did not converge");
    }
    const auto& ev = solver.eigenvalues();
    std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

QVector solve_q(const QMatrix& A, const QVector& b, double rank_tol) {
    const std::size_t n = A.dim();
    if (b.dim() != n) throw DimensionMismatch(n, b.dim());
    const ChiMatrix c = chi(A);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(s.size() - 1) <= rank_tol * s(0)) {
        throw SingularSystem("system matrix is numerically singular");
    }
    return from_complex(svd.solve(to_complex(b)));
}

double min_hermitian_eigenvalue(const QMatrix& H) {
    const std::size_t n = H.dim();
    if (n == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(chi(H).m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NoConvergence("Hermitian eigensolver did not converge");
    return solver.eigenvalues()(0);
}

QMatrix gram(const std::vector<QVector>& vs) {
    QMatrix g(vs.size(), vs.size());
    for (std::size_t a = 0; a < vs.size(); ++a) {
        for (std::size_t b = 0; b < vs.size(); ++b) g(a, b) = inner(vs[a], vs[b]);
    }
    return g;
}

} // namespace qdef
