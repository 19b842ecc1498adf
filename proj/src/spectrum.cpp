#include "qdef/spectrum.hpp"

#include "qdef/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdef {

namespace {

void add_sphere(std::vector<EigenSphere>& spheres, double re, double im_mag, std::size_t mult,
                double tol) {
    for (auto& s : spheres) {
        if (std::abs(s.re - re) <= tol && std::abs(s.im_mag - im_mag) <= tol) {
            s.multiplicity += mult;
            return;
        }
    }
    spheres.push_back({re, im_mag, mult, false});
}

} // namespace

SpectrumReport point_sspectrum(const QOperator& A, double rank_tol) {
    const std::size_t n = A.dim();
    SpectrumReport report;
    if (n == 0) {
        report.all_real = true;
        return report;
    }
    const auto eig = eigenvalues_c(A);
    const double scale = std::max(1.0, operator_norm(A));
    const double pair_tol = kPairingTol * scale;
    const double real_tol = kRealEigenTol * scale;

    std::vector<double> reals;
    std::vector<std::complex<double>> upper;
    std::vector<std::complex<double>> lower;
    for (const auto& z : eig) {
        if (std::abs(z.imag()) <= real_tol) {
            reals.push_back(z.real());
        } else if (z.imag() > 0) {
            upper.push_back(z);
        } else {
            lower.push_back(z);
        }
    }

    // Real points appear twice each in chi(A).
    std::sort(reals.begin(), reals.end());
    for (std::size_t a = 0; a < reals.size();) {
        std::size_t b = a + 1;
        while (b < reals.size() && reals[b] - reals[b - 1] <= pair_tol) ++b;
        const std::size_t count = b - a;
        if (count % 2 != 0) {
            throw InternalInconsistency("real eigenvalue cluster near " + std::to_string(reals[a]) +
                                        " has odd size " + std::to_string(count));
        }
        double mean = 0.0;
        for (std::size_t k = a; k < b; ++k) mean += reals[k];
        add_sphere(report.spheres, mean / static_cast<double>(count), 0.0, count / 2, pair_tol);
        a = b;
    }

    // Nonreal eigenvalues pair with their conjugates.
    if (upper.size() != lower.size()) {
        throw InternalInconsistency("eigenvalues of the adjoint representation are not closed under "
                                    "conjugation");
    }
    std::vector<bool> used(lower.size(), false);
    for (const auto& z : upper) {
        std::size_t best = lower.size();
        double best_d = 0.0;
        for (std::size_t k = 0; k < lower.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(std::conj(lower[k]) - z);
            if (best == lower.size() || d < best_d) {
                best = k;
                best_d = d;
            }
        }
        if (best == lower.size() || best_d > pair_tol) {
            throw InternalInconsistency("no conjugate partner for eigenvalue (" +
                                        std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                        ")");
        }
        used[best] = true;
        const std::complex<double> mid = 0.5 * (z + std::conj(lower[best]));
        add_sphere(report.spheres, mid.real(), mid.imag(), 1, pair_tol);
    }

    std::sort(report.spheres.begin(), report.spheres.end(), [](const auto& a, const auto& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im_mag < b.im_mag;
    });

    for (auto& s : report.spheres) {
        const Quaternion q = s.representative();
        const auto sigma = singular_values_c(resolvent_poly(A, q));
        const double cut = std::max(rank_tol * sigma.front(), kPairingTol * std::pow(scale + q.norm(), 2));
        s.kernel_verified = sigma.back() <= cut;
        report.max_im_mag = std::max(report.max_im_mag, s.im_mag);
    }
    report.all_real = report.max_im_mag <= kRealSpectrumTol;
    report.note = "finite dimension: S-spectrum equals point S-spectrum; residual and continuous "
                  "S-spectrum are empty";
    return report;
}

SelfAdjointVerdict selfadjoint_iff_real(const QOperator& A, const LeftMul& L, bool require_converse) {
    const SymmetryReport sym = symmetry_predicates(A, L);
    SelfAdjointVerdict v;
    v.self_adjoint = sym.is_symmetric;
    v.hypotheses_met = sym.is_symmetric && sym.units_anti_symmetric();
    if (require_converse && !v.hypotheses_met) {
        throw PreconditionFailed("converse direction needs A symmetric with iA, jA, kA anti-symmetric");
    }
    const SpectrumReport spec = point_sspectrum(A);
    v.max_im_mag = spec.max_im_mag;
    v.all_real = spec.max_im_mag <= kRealSpectrumTol;
    const bool forward = !v.self_adjoint || v.all_real;
    const bool converse = !v.hypotheses_met || !v.all_real || v.self_adjoint;
    v.consistent = forward && converse;
    return v;
}

ResolventBound resolvent_bound_check(const QOperator& A, const Quaternion& q, std::size_t samples,
                                     std::uint64_t seed) {
    const std::size_t n = A.dim();
    const double im2 = im_norm(q) * im_norm(q);
    if (im2 == 0.0) throw PreconditionFailed("resolvent bound needs a nonreal q");
    if (max_entry_distance(A, adjoint(A)) > kSymmetryTol) {
        throw PreconditionFailed("resolvent bound needs a self-adjoint operator");
    }
    const QOperator R = resolvent_poly(A, q);
    const auto sigma = singular_values_c(R);
    if (sigma.empty() || sigma.back() <= kDefaultRankTol * sigma.front()) {
        throw SingularSystem("q = " + to_string(q) + " lies on the spherical spectrum");
    }

    ResolventBound out;
    out.bound = 1.0 / im2;
    out.inverse_norm = 1.0 / sigma.back();
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const QVector psi = rng.vector(n);
        const QVector x = solve_q(R, psi);
        out.sampled_violation = std::max(out.sampled_violation, x.norm() * im2 / psi.norm() - 1.0);
        const QVector phi = rng.vector(n);
        out.lower_bound_violation =
            std::max(out.lower_bound_violation, 1.0 - (R * phi).norm() / (im2 * phi.norm()));
    }
    return out;
}

std::string spheres_csv(const SpectrumReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "re,im_mag,mult\n";
    for (const auto& s : report.spheres) os << s.re << ',' << s.im_mag << ',' << s.multiplicity << '\n';
    return os.str();
}

} // namespace qdef
