#include "qdef/deficiency.hpp"

#include "qdef/errors.hpp"
#include "qdef/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qdef {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRescaleHigh = 1e100;
constexpr double kRescaleLow = 1e-100;
constexpr double kLeadingTol = 1e-12;
constexpr double kDirectnessTol = 1e-8;

// Extended-precision quaternion used only for the recurrence cross-check.
struct QuatL {
    long double a = 0, b = 0, c = 0, d = 0;

    QuatL() = default;
    QuatL(long double r) : a(r) {}
    QuatL(long double a_, long double b_, long double c_, long double d_) : a(a_), b(b_), c(c_), d(d_) {}
    explicit QuatL(const Quaternion& q) : a(q.q0), b(q.q1), c(q.q2), d(q.q3) {}

    long double norm2() const { return a * a + b * b + c * c + d * d; }
    QuatL inv() const {
        const long double n = norm2();
        return {a / n, -b / n, -c / n, -d / n};
    }
    friend QuatL operator+(const QuatL& x, const QuatL& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
    friend QuatL operator-(const QuatL& x, const QuatL& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
    friend QuatL operator*(const QuatL& x, long double s) { return {x.a * s, x.b * s, x.c * s, x.d * s}; }
    friend QuatL operator*(const QuatL& x, const QuatL& y) {
        return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
                x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
                x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
                x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
    }
};

Quaternion to_double(const QuatL& x) {
    return {static_cast<double>(x.a), static_cast<double>(x.b), static_cast<double>(x.c),
            static_cast<double>(x.d)};
}

Quaternion eval_poly(const std::vector<Quaternion>& p, double n) {
    Quaternion acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * n + *it;
    return acc;
}

bool is_real(const Quaternion& q) { return q.q1 == 0.0 && q.q2 == 0.0 && q.q3 == 0.0; }

// Forward recurrence for one seed slot, generic over the scalar type.
template <typename Q>
struct Run {
    std::vector<Q> c;
    std::vector<double> log_scale;
};

template <typename Q>
Run<Q> forward_recurrence(const BandedOperator& A, const Quaternion& q, std::size_t N,
                          std::size_t slot) {
    const std::size_t w = A.bandwidth();
    const int wi = static_cast<int>(w);
    Run<Q> run;
    run.c.assign(N, Q{});
    run.log_scale.assign(N, 0.0);
    run.c[slot] = Q(1.0);
    const Q qq(q);
    for (std::size_t n = 0; n + w < N; ++n) {
        Q rhs = qq * run.c[n];
        for (int d = -wi; d < wi; ++d) {
            if (static_cast<long long>(n) + d < 0) continue;
            rhs = rhs - Q(A.adjoint_coeff(n, d)) * run.c[n + d];
        }
        const std::size_t next = n + w;
        run.c[next] = Q(A.adjoint_coeff(n, wi)).inv() * rhs;
        run.log_scale[next] = run.log_scale[n];

        // Entries feeding later rows: [n + 1 - w, n + w].
        const std::size_t lo = (n + 1 >= w) ? n + 1 - w : 0;
        double big = 0.0;
        for (std::size_t k = lo; k <= next; ++k) {
            big = std::max(big, std::sqrt(static_cast<double>(run.c[k].norm2())));
        }
        if (big > kRescaleHigh || (big > 0.0 && big < kRescaleLow)) {
            const double shift = std::log(big);
            const auto factor = static_cast<decltype(run.c[0].norm2())>(1.0 / big);
            for (std::size_t k = lo; k <= next; ++k) {
                run.c[k] = run.c[k] * factor;
                run.log_scale[k] += shift;
            }
        }
    }
    return run;
}

double log_abs2_of(const Quaternion& v, double log_scale) {
    const double n2 = v.norm2();
    return n2 == 0.0 ? kNegInf : std::log(n2) + 2.0 * log_scale;
}

double block_precision_gap(const Run<Quaternion>& lo, const Run<QuatL>& hi, std::size_t window) {
    double worst = 0.0;
    const std::size_t N = lo.c.size();
    for (std::size_t start = 0; start < N; start += window) {
        const std::size_t end = std::min(N, start + window);
        double ref_shift = kNegInf;
        for (std::size_t k = start; k < end; ++k) {
            if (hi.c[k].norm2() > 0) ref_shift = std::max(ref_shift, hi.log_scale[k]);
        }
        if (ref_shift == kNegInf) continue;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            const Quaternion h = to_double(hi.c[k]) * std::exp(hi.log_scale[k] - ref_shift);
            const Quaternion l = lo.c[k] * std::exp(lo.log_scale[k] - ref_shift);
            num += (h - l).norm2();
            den += h.norm2();
        }
        if (den > 0.0) worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
}

double recurrence_residual(const BandedOperator& A, const FormalSolution& s) {
    const std::size_t w = A.bandwidth();
    const int wi = static_cast<int>(w);
    double worst = 0.0;
    for (std::size_t n = 0; n + w < s.size(); ++n) {
        double shift = s.log_scale[n];
        for (int d = -wi; d <= wi; ++d) {
            if (static_cast<long long>(n) + d >= 0) shift = std::max(shift, s.log_scale[n + d]);
        }
        Quaternion lhs;
        double mag = 0.0;
        for (int d = -wi; d <= wi; ++d) {
            if (static_cast<long long>(n) + d < 0) continue;
            const Quaternion term = A.adjoint_coeff(n, d) * s.scaled_value(n + d, shift);
            lhs += term;
            mag += term.norm();
        }
        const Quaternion qc = s.q * s.scaled_value(n, shift);
        mag += qc.norm();
        if (mag > 0.0) worst = std::max(worst, (lhs - qc).norm() / mag);
    }
    return worst;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

SummabilityFit fit_range(const std::vector<double>& L, const std::vector<double>& centers,
                         std::size_t start, const DeficiencyOptions& opt) {
    SummabilityFit fit;
    std::vector<double> idx, logc, vals;
    for (std::size_t b = start; b < L.size(); ++b) {
        if (L[b] == kNegInf) continue;
        idx.push_back(static_cast<double>(b));
        logc.push_back(std::log(centers[b]));
        vals.push_back(L[b]);
    }
    fit.blocks_used = L.size() - start;
    // A tail that is exactly zero is finitely supported.
    if (L.back() == kNegInf) {
        fit.verdict = Summability::square_summable;
        fit.power_slope = kNegInf;
        fit.log_block_ratio = kNegInf;
        return fit;
    }
    if (vals.size() < 2) return fit;
    fit.log_block_ratio = ls_slope(idx, vals);
    fit.power_slope = ls_slope(logc, vals);
    if (fit.log_block_ratio >= std::log1p(opt.ratio_tol) || fit.power_slope >= -1.0 + opt.slope_margin) {
        fit.verdict = Summability::divergent;
    } else if (fit.power_slope <= -1.0 - opt.slope_margin &&
               fit.log_block_ratio <= std::log1p(-opt.ratio_tol)) {
        fit.verdict = Summability::square_summable;
    }
    return fit;
}

// log of sum of exp(values), ignoring -inf.
double log_sum_exp(const std::vector<double>& v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) {
        if (x != kNegInf) s += std::exp(x - m);
    }
    return m + std::log(s);
}

std::vector<double> block_centers(std::size_t blocks, std::size_t window) {
    std::vector<double> c(blocks);
    for (std::size_t b = 0; b < blocks; ++b) c[b] = (static_cast<double>(b) + 0.5) * static_cast<double>(window);
    return c;
}

// Log block energies of the directions of the solution span, ascending.
std::vector<std::vector<double>> direction_energies(const std::vector<FormalSolution>& sols,
                                                    std::size_t window) {
    const std::size_t w = sols.size();
    const std::size_t N = sols.front().size();
    const std::size_t blocks = N / window;
    std::vector<std::vector<double>> out(w, std::vector<double>(blocks, kNegInf));
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t start = b * window;
        double shift = kNegInf;
        for (const auto& s : sols) {
            for (std::size_t k = start; k < start + window; ++k) shift = std::max(shift, 0.5 * s.log_abs2(k));
        }
        if (shift == kNegInf) continue;
        std::vector<QVector> cols;
        for (const auto& s : sols) {
            QVector v(window);
            for (std::size_t k = 0; k < window; ++k) v[k] = s.scaled_value(start + k, shift);
            cols.push_back(std::move(v));
        }
        // chi of a Hermitian Gram matrix has each eigenvalue twice.
        const QMatrix G = gram(cols);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(chi(G).m, Eigen::EigenvaluesOnly);
        for (std::size_t k = 0; k < w; ++k) {
            const double lam = es.eigenvalues()(static_cast<Eigen::Index>(2 * k));
            out[k][b] = lam > 0.0 ? std::log(lam) + 2.0 * shift : kNegInf;
        }
    }
    return out;
}

Quaternion sample_in_ball(Rng& rng, const Quaternion& center, double radius) {
    for (;;) {
        const Quaternion d = rng.quaternion();
        const double n = d.norm();
        if (n < 1e-9) continue;
        const double r = radius * std::pow(rng.uniform(0.0, 1.0), 0.25);
        return center + d * (r / n);
    }
}

void require_symmetric(const BandedOperator& A) {
    if (!A.symmetric()) {
        throw PreconditionFailed("operator '" + A.description() + "' is not symmetric");
    }
}

QVector truncated_vector(const FormalSolution& s) {
    double shift = kNegInf;
    for (std::size_t k = 0; k < s.size(); ++k) shift = std::max(shift, 0.5 * s.log_abs2(k));
    QVector v(s.size());
    if (shift == kNegInf) return v;
    for (std::size_t k = 0; k < s.size(); ++k) v[k] = s.scaled_value(k, shift);
    return v * (1.0 / v.norm());
}

std::vector<QVector> summable_vectors(const BandedOperator& A, const Quaternion& q,
                                      const DeficiencyOptions& opt) {
    std::vector<QVector> out;
    for (const auto& s : formal_solutions(A, q, opt.N)) {
        if (classify_l2(s, opt.window, opt).verdict == Summability::square_summable) {
            out.push_back(truncated_vector(s));
        }
    }
    return out;
}

void fill_directness(DirectnessRecord& r, const std::vector<QVector>& kp, const std::vector<QVector>& km) {
    r.k_plus = kp.size();
    r.k_minus = km.size();
    r.trivial = kp.empty() && km.empty();
    std::vector<QVector> all;
    for (const auto& v : kp) all.push_back(v * (1.0 / v.norm()));
    for (const auto& v : km) all.push_back(v * (1.0 / v.norm()));
    r.gram_min_eigenvalue = all.empty() ? 1.0 : min_hermitian_eigenvalue(gram(all));
    r.min_distance = 1.0;
    if (!kp.empty() && !km.empty()) {
        const auto P = orthonormalize(kp);
        const auto Q = orthonormalize(km);
        QMatrix cross(P.size(), Q.size());
        for (std::size_t a = 0; a < P.size(); ++a) {
            for (std::size_t b = 0; b < Q.size(); ++b) cross(a, b) = inner(P[a], Q[b]);
        }
        const double smax = operator_norm(cross);
        r.min_distance = std::sqrt(std::max(0.0, 1.0 - smax * smax));
    }
    r.direct = r.gram_min_eigenvalue > kDirectnessTol;
}

} // namespace

// ---------------------------------------------------------------------------
// BandedOperator

BandedOperator::BandedOperator(std::size_t bandwidth, std::map<int, std::vector<Quaternion>> offsets,
                               std::string description)
    : bandwidth_(bandwidth), offsets_(std::move(offsets)), description_(std::move(description)) {
    const int w = static_cast<int>(bandwidth_);
    for (const auto& [d, poly] : offsets_) {
        if (d < -w || d > w) {
            throw PreconditionFailed("offset " + std::to_string(d) + " exceeds bandwidth " +
                                     std::to_string(bandwidth_));
        }
    }
    symmetric_ = true;
    real_entries_ = true;
    for (std::size_t n = 0; n < kSampleRows; ++n) {
        for (int d = -w; d <= w; ++d) {
            if (static_cast<long long>(n) + d < 0) continue;
            const Quaternion a = coeff(n, d);
            if (!is_real(a)) real_entries_ = false;
            const Quaternion mirrored = coeff(n + d, -d).conj();
            if (distance(a, mirrored) > 1e-12 * std::max(1.0, a.norm())) symmetric_ = false;
        }
    }
}

BandedOperator BandedOperator::number_operator() {
    return BandedOperator(0, {{0, {0.0, 1.0}}}, "number_operator");
}

BandedOperator BandedOperator::free_jacobi() {
    return BandedOperator(1, {{-1, {1.0}}, {0, {0.0}}, {1, {1.0}}}, "free_jacobi");
}

BandedOperator BandedOperator::jacobi_sq() {
    // A_{n,n+1} = (n+1)^2, A_{n,n-1} = n^2.
    return BandedOperator(1, {{-1, {0.0, 0.0, 1.0}}, {0, {0.0}}, {1, {1.0, 2.0, 1.0}}}, "jacobi_sq");
}

BandedOperator BandedOperator::preset(const std::string& name) {
    if (name == "number_operator") return number_operator();
    if (name == "free_jacobi") return free_jacobi();
    if (name == "jacobi_sq") return jacobi_sq();
    throw ConfigParse("unknown banded preset '" + name + "'");
}

Quaternion BandedOperator::coeff(std::size_t n, int d) const {
    if (std::abs(d) > static_cast<int>(bandwidth_)) return {};
    if (static_cast<long long>(n) + d < 0) return {};
    const auto it = offsets_.find(d);
    if (it == offsets_.end()) return {};
    return eval_poly(it->second, static_cast<double>(n));
}

Quaternion BandedOperator::adjoint_coeff(std::size_t n, int d) const {
    if (static_cast<long long>(n) + d < 0) return {};
    return coeff(n + d, -d).conj();
}

BandedOperator BandedOperator::scaled(double s) const {
    auto offs = offsets_;
    for (auto& [d, poly] : offs) {
        for (auto& c : poly) c = c * s;
    }
    std::ostringstream name;
    name << description_ << " scaled by " << s;
    return BandedOperator(bandwidth_, std::move(offs), name.str());
}

QMatrix BandedOperator::truncate(std::size_t M) const {
    QMatrix T(M, M);
    const int w = static_cast<int>(bandwidth_);
    for (std::size_t n = 0; n < M; ++n) {
        for (int d = -w; d <= w; ++d) {
            const long long col = static_cast<long long>(n) + d;
            if (col >= 0 && col < static_cast<long long>(M)) T(n, static_cast<std::size_t>(col)) = coeff(n, d);
        }
    }
    return T;
}

QMatrix BandedOperator::truncate_adjoint(std::size_t M) const {
    QMatrix T(M, M);
    const int w = static_cast<int>(bandwidth_);
    for (std::size_t n = 0; n < M; ++n) {
        for (int d = -w; d <= w; ++d) {
            const long long col = static_cast<long long>(n) + d;
            if (col >= 0 && col < static_cast<long long>(M)) {
                T(n, static_cast<std::size_t>(col)) = adjoint_coeff(n, d);
            }
        }
    }
    return T;
}

// ---------------------------------------------------------------------------
// Formal solutions

double FormalSolution::log_abs2(std::size_t n) const { return log_abs2_of(coeffs[n], log_scale[n]); }

Quaternion FormalSolution::scaled_value(std::size_t n, double shift) const {
    if (coeffs[n].norm2() == 0.0) return {};
    return coeffs[n] * std::exp(log_scale[n] - shift);
}

FormalSolution make_solution(std::vector<Quaternion> coeffs, const Quaternion& q) {
    FormalSolution s;
    s.log_scale.assign(coeffs.size(), 0.0);
    s.coeffs = std::move(coeffs);
    s.q = q;
    return s;
}

std::vector<FormalSolution> formal_solutions(const BandedOperator& A, const Quaternion& q, std::size_t N) {
    const std::size_t w = A.bandwidth();
    std::vector<FormalSolution> out;
    if (w == 0) {
        // Decoupled rows: (A_nn - q) c_n = 0.
        for (std::size_t n = 0; n < N; ++n) {
            if (distance(A.adjoint_coeff(n, 0), q) <= kLeadingTol * std::max(1.0, q.norm())) {
                FormalSolution s = make_solution(std::vector<Quaternion>(N), q);
                s.coeffs[n] = 1.0;
                s.seed_slot = n;
                out.push_back(std::move(s));
            }
        }
        return out;
    }
    if (N < 10 * w) {
        throw PreconditionFailed("truncation length " + std::to_string(N) + " is below 10 x bandwidth");
    }
    for (std::size_t n = 0; n + w < N; ++n) {
        if (A.adjoint_coeff(n, static_cast<int>(w)).norm() <= kLeadingTol) throw SingularLeadingCoefficient(n);
    }
    for (std::size_t slot = 0; slot < w; ++slot) {
        auto lo = forward_recurrence<Quaternion>(A, q, N, slot);
        auto hi = forward_recurrence<QuatL>(A, q, N, slot);
        FormalSolution s;
        s.q = q;
        s.seed_slot = slot;
        s.precision_discrepancy = block_precision_gap(lo, hi, std::max<std::size_t>(1, N / 20));
        s.coeffs = std::move(lo.c);
        s.log_scale = std::move(lo.log_scale);
        s.recurrence_residual = recurrence_residual(A, s);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summability

const char* to_string(Summability s) {
    switch (s) {
    case Summability::square_summable: return "square_summable";
    case Summability::divergent: return "divergent";
    default: return "inconclusive";
    }
}

SummabilityFit classify_block_energies(const std::vector<double>& L, const std::vector<double>& centers,
                                       const DeficiencyOptions& opt) {
    const std::size_t B = L.size();
    if (B < 4) return {};
    const std::size_t start = std::min(B / 2, B - 4);
    SummabilityFit whole = fit_range(L, centers, start, opt);
    const std::size_t mid = start + (B - start) / 2;
    const SummabilityFit tail = fit_range(L, centers, std::min(mid, B - 2), opt);
    if (whole.verdict != tail.verdict) whole.verdict = Summability::inconclusive;
    return whole;
}

SummabilityFit classify_l2(const FormalSolution& sol, std::size_t window, const DeficiencyOptions& opt) {
    if (window == 0 || sol.size() < 4 * window) return {};
    const std::size_t blocks = sol.size() / window;
    std::vector<double> L(blocks);
    std::vector<double> terms(window);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t k = 0; k < window; ++k) terms[k] = sol.log_abs2(b * window + k);
        L[b] = log_sum_exp(terms);
    }
    return classify_block_energies(L, block_centers(blocks, window), opt);
}

KernelCount summable_kernel_dim(const BandedOperator& A, const Quaternion& q, const DeficiencyOptions& opt,
                                int sign) {
    KernelCount out;
    const auto sols = formal_solutions(A, q, opt.N);
    for (const auto& s : sols) out.max_residual = std::max(out.max_residual, s.recurrence_residual);

    if (sols.size() <= 1 || A.bandwidth() == 0) {
        for (std::size_t k = 0; k < sols.size(); ++k) {
            SolutionEvidence ev{sign, q, k, classify_l2(sols[k], opt.window, opt), sols[k].precision_discrepancy};
            if (ev.precision_discrepancy > opt.precision_tol) ev.fit.verdict = Summability::inconclusive;
            out.evidence.push_back(ev);
        }
    } else {
        double gap = 0.0;
        for (const auto& s : sols) gap = std::max(gap, s.precision_discrepancy);
        if (opt.window == 0 || opt.N < 4 * opt.window) {
            for (std::size_t k = 0; k < sols.size(); ++k) out.evidence.push_back({sign, q, k, {}, gap});
        } else {
            const auto energies = direction_energies(sols, opt.window);
            const auto centers = block_centers(energies.front().size(), opt.window);
            for (std::size_t k = 0; k < energies.size(); ++k) {
                SolutionEvidence ev{sign, q, k, classify_block_energies(energies[k], centers, opt), gap};
                if (gap > opt.precision_tol) ev.fit.verdict = Summability::inconclusive;
                out.evidence.push_back(ev);
            }
        }
    }
    for (const auto& ev : out.evidence) {
        if (ev.fit.verdict == Summability::square_summable) ++out.dim;
        if (ev.fit.verdict == Summability::inconclusive) out.conclusive = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Deficiency indices

Quaternion unit_quaternion(char unit) {
    switch (unit) {
    case 'i': return Quaternion::i();
    case 'j': return Quaternion::j();
    case 'k': return Quaternion::k();
    default: throw PreconditionFailed(std::string("unit must be one of i, j, k, got '") + unit + "'");
    }
}

DeficiencyReport deficiency_indices(const BandedOperator& A, char unit, const DeficiencyOptions& opt) {
    require_symmetric(A);
    const Quaternion e = unit_quaternion(unit);
    DeficiencyReport r;
    r.description = A.description();
    r.unit = unit;
    r.bandwidth = A.bandwidth();
    r.options = opt;
    r.hypotheses_unmet = !A.real_entries();

    const KernelCount plus = summable_kernel_dim(A, e, opt, +1);
    const KernelCount minus = summable_kernel_dim(A, -e, opt, -1);
    r.n_plus = plus.dim;
    r.n_minus = minus.dim;
    r.evidence = plus.evidence;
    r.evidence.insert(r.evidence.end(), minus.evidence.begin(), minus.evidence.end());
    bool conclusive = plus.conclusive && minus.conclusive;

    if (opt.check_doubling) {
        DeficiencyOptions twice = opt;
        twice.N = 2 * opt.N;
        const KernelCount plus2 = summable_kernel_dim(A, e, twice, +1);
        const KernelCount minus2 = summable_kernel_dim(A, -e, twice, -1);
        r.doubling_agrees = plus2.dim == plus.dim && minus2.dim == minus.dim && plus2.conclusive &&
                            minus2.conclusive;
        conclusive = conclusive && r.doubling_agrees;
        const std::size_t w = A.bandwidth();
        const auto suspect = [&](const KernelCount& a, const KernelCount& b) {
            return w > 0 && a.dim == w && b.dim == w && b.max_residual > 1e-10;
        };
        r.infinite_suspected_plus = suspect(plus, plus2);
        r.infinite_suspected_minus = suspect(minus, minus2);
    }
    r.status = conclusive ? DeficiencyStatus::ok : DeficiencyStatus::inconclusive;
    r.self_adjoint = conclusive && r.n_plus == 0 && r.n_minus == 0;
    return r;
}

StabilityRecord index_stability_scan(const BandedOperator& A, const Quaternion& center, std::size_t count,
                                     const DeficiencyOptions& opt, std::uint64_t seed) {
    const double im = im_norm(center);
    if (im == 0.0) throw PreconditionFailed("stability scan needs a nonreal center");
    if (!A.real_entries()) throw PreconditionFailed("stability scan needs real band entries");
    require_symmetric(A);

    Rng rng(seed);
    StabilityRecord rec;
    rec.center = center;
    const std::array<Quaternion, 3> units{Quaternion::i(), Quaternion::j(), Quaternion::k()};
    for (std::size_t t = 0; t < count; ++t) {
        Quaternion q;
        if (t % 2 == 0) {
            q = sample_in_ball(rng, center, 0.75 * im);
        } else {
            const double lambda = rng.uniform(0.5, 3.0) * (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
            q = units[(t / 2) % 3] * lambda;
        }
        const KernelCount kc = summable_kernel_dim(A, q, opt);
        rec.entries.push_back({q, kc.dim, kc.conclusive});
    }
    rec.all_equal = !rec.entries.empty();
    if (!rec.entries.empty()) rec.value = rec.entries.front().dim;
    std::ostringstream discord;
    for (const auto& e : rec.entries) {
        if (!e.conclusive || e.dim != rec.value) {
            rec.all_equal = false;
            discord << ' ' << to_string(e.q) << (e.conclusive ? "" : "(inconclusive)") << "->" << e.dim;
        }
    }
    if (!rec.all_equal) {
        throw StabilityViolation("square-summable kernel dimension is not constant; first value " +
                                 std::to_string(rec.value) + ", discordant:" + discord.str());
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Von Neumann directness, finite checks

DirectnessRecord von_neumann_evidence(const BandedOperator& A, const Quaternion& q, const DeficiencyOptions& opt) {
    if (im_norm(q) == 0.0) throw PreconditionFailed("directness check needs a nonreal q");
    require_symmetric(A);
    DirectnessRecord r;
    r.q = q;
    fill_directness(r, summable_vectors(A, q, opt), summable_vectors(A, q.conj(), opt));
    return r;
}

DirectnessRecord von_neumann_evidence(const QOperator& A, const LeftMul& L, const Quaternion& q,
                                      double rank_tol) {
    if (im_norm(q) == 0.0) throw PreconditionFailed("directness check needs a nonreal q");
    if (max_entry_distance(A, adjoint(A)) > kSymmetryTol) {
        throw PreconditionFailed("directness check needs a symmetric operator");
    }
    const QOperator Ad = adjoint(A);
    DirectnessRecord r;
    r.q = q;
    fill_directness(r, kernel_q(shifted(Ad, L, q), rank_tol).vectors,
                    kernel_q(shifted(Ad, L, q.conj()), rank_tol).vectors);
    return r;
}

std::pair<std::size_t, std::size_t> finite_deficiency_indices(const QOperator& A, const LeftMul& L, char unit,
                                                              double rank_tol) {
    const Quaternion e = unit_quaternion(unit);
    const QOperator Ad = adjoint(A);
    return {kernel_q(shifted(Ad, L, e), rank_tol).qdim, kernel_q(shifted(Ad, L, -e), rank_tol).qdim};
}

std::size_t truncated_kernel_qdim(const BandedOperator& A, const Quaternion& q, std::size_t M, double rank_tol) {
    const std::size_t w = A.bandwidth();
    if (M <= w) throw PreconditionFailed("truncation too small for the bandwidth");
    QMatrix T = A.truncate_adjoint(M);
    for (std::size_t n = 0; n < M; ++n) T(n, n) -= q;
    QMatrix cut(M - w, M);
    for (std::size_t r = 0; r < M - w; ++r) {
        for (std::size_t c = 0; c < M; ++c) cut(r, c) = T(r, c);
    }
    return kernel_q(cut, rank_tol).qdim;
}

std::size_t basis_invariance_check(const QOperator& A, const Basis& B2, const Quaternion& q, std::size_t trials,
                                   std::uint64_t seed, double rank_tol) {
    const std::size_t n = A.dim();
    const double im = im_norm(q);
    if (im == 0.0) throw PreconditionFailed("basis invariance needs a nonreal q");
    if (B2.dim() != n) throw DimensionMismatch(n, B2.dim());
    for (const auto& x : A.data()) {
        if (!is_real(x)) throw PreconditionFailed("basis invariance needs a real symmetric operator");
    }
    if (max_entry_distance(A, adjoint(A)) > kSymmetryTol) {
        throw PreconditionFailed("basis invariance needs a real symmetric operator");
    }
    const LeftMul L1 = LeftMul::canonical(n);
    const LeftMul L2(B2);
    Rng rng(seed);
    std::size_t worst = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Quaternion qt = (t == 0) ? q : Quaternion(q.real()) + rng.unit_imaginary() * im;
        const std::size_t d1 = n - rank_q(shifted(A, L1, qt), rank_tol);
        const std::size_t d2 = n - rank_q(shifted(A, L2, qt), rank_tol);
        worst = std::max(worst, d1 > d2 ? d1 - d2 : d2 - d1);
    }
    return worst;
}

} // namespace qdef
