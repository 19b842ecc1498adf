#include "qdef/cli.hpp"

#include "qdef/deficiency.hpp"
#include "qdef/errors.hpp"
#include "qdef/io.hpp"
#include "qdef/qoperator.hpp"
#include "qdef/random.hpp"
#include "qdef/spectrum.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qdef::cli {

namespace {

using io::json;

constexpr std::size_t kTruncationDim = 20;
constexpr std::size_t kOracleDim = 60;
constexpr std::size_t kSamplePairs = 20;
constexpr std::size_t kScanCount = 20;
constexpr double kResolventTol = 1e-8;

const char* command_name(Command c) {
    switch (c) {
    case Command::verify: return "verify";
    case Command::sspectrum: return "sspectrum";
    case Command::deficiency: return "deficiency";
    case Command::invariance: return "invariance";
    case Command::report: return "report";
    }
    return "?";
}

json tolerances_json(const Tolerances& t) {
    return {{"atol", t.atol},     {"rank_tol", t.rank_tol}, {"ratio", t.ratio},
            {"window", t.window}, {"N", t.N},               {"property_tol", t.property_tol}};
}

DeficiencyOptions deficiency_options(const Tolerances& t) {
    DeficiencyOptions o;
    o.N = t.N;
    o.window = t.window;
    o.ratio_tol = t.ratio;
    o.rank_tol = t.rank_tol;
    return o;
}

/// Ordered list of named pass/fail checks.
class Suite {
public:
    void expect(const std::string& name, bool ok, json detail = json::object()) {
        detail["name"] = name;
        detail["passed"] = ok;
        checks_.push_back(std::move(detail));
        passed_ = passed_ && ok;
    }

    void bound(const std::string& name, double residual, double tol) {
        expect(name, residual <= tol, {{"residual", residual}, {"tol", tol}});
    }

    void skip(const std::string& name, const std::string& reason) {
        checks_.push_back({{"name", name}, {"skipped", reason}});
    }

    template <class F>
    void guard(const std::string& name, F&& body) {
        try {
            body();
        } catch (const Error& e) {
            expect(name, false, {{"error", e.what()}});
        }
    }

    bool passed() const { return passed_; }
    const json& checks() const { return checks_; }

private:
    json checks_ = json::array();
    bool passed_ = true;
};

struct Source {
    std::string label;
    io::AnyOperator op;
};

Source load_source(const RunConfig& c) {
    if (c.preset.empty() == c.matrix_path.empty()) {
        throw ConfigParse("give exactly one of --preset or --matrix");
    }
    if (!c.matrix_path.empty()) {
        return {c.matrix_path, io::any_operator_from_json(io::load_json_file(c.matrix_path))};
    }
    const std::string& p = c.preset;
    if (p == "real_symmetric") return {p, real_symmetric(c.seed, c.dim)};
    if (p == "hermitian_random") return {p, hermitian_random(c.seed, c.dim)};
    if (p == "left_scalar_i") return {p, left_scalar(Quaternion::i(), c.dim)};
    if (p == "diag_1_2") {
        const std::vector<Quaternion> d{1.0, 2.0};
        return {p, QOperator::diagonal(d)};
    }
    return {p, BandedOperator::preset(p)};
}

Quaternion nonreal_q(const RunConfig& c) {
    if (c.q && im_norm(*c.q) > 0.0) return *c.q;
    return unit_quaternion(c.unit);
}

double scale_of(const QOperator& A) { return std::max(1.0, operator_norm(A)); }

void left_mul_axioms(Suite& s, std::size_t dim, Rng& rng, double atol) {
    const LeftMul L(random_unitary_basis(rng, dim));
    double dist = 0, norm = 0, comp = 0, shift = 0, real = 0, basis = 0, sum = 0, solve = 0;
    for (std::size_t t = 0; t < kSamplePairs; ++t) {
        const Quaternion p = rng.quaternion();
        const Quaternion q = rng.quaternion();
        const double r = rng.normal();
        const QVector phi = rng.unit_vector(dim);
        const QVector psi = rng.unit_vector(dim);
        const double scale = 1.0 + p.norm() * q.norm() + p.norm() + q.norm();
        dist = std::max(dist, distance(left_scale(L, q, phi + psi),
                                       left_scale(L, q, phi) + left_scale(L, q, psi)) / scale);
        norm = std::max(norm, std::abs(left_scale(L, q, phi).norm() - q.norm()) / scale);
        comp = std::max(comp, distance(left_scale(L, p, left_scale(L, q, phi)),
                                       left_scale(L, p * q, phi)) / scale);
        shift = std::max(shift, distance(inner(left_scale(L, q.conj(), phi), psi),
                                         inner(phi, left_scale(L, q, psi))) / scale);
        real = std::max(real, distance(left_scale(L, Quaternion(r), phi), phi * r) / (1.0 + std::abs(r)));
        const std::size_t k = rng.index(0, dim - 1);
        basis = std::max(basis, distance(left_scale(L, q, L.basis()[k]), L.basis()[k] * q) / scale);
        sum = std::max(sum, distance(left_scale(L, p + q, phi),
                                     left_scale(L, p, phi) + left_scale(L, q, phi)) / scale);
        solve = std::max(solve, distance(left_scale(L, q, left_solve(L, q, psi)), psi) / scale);
    }
    s.bound("left_mul.distributive", dist, atol);
    s.bound("left_mul.norm", norm, atol);
    s.bound("left_mul.composition", comp, atol);
    s.bound("left_mul.adjoint_shift", shift, atol);
    s.bound("left_mul.real_commutes", real, atol);
    s.bound("left_mul.basis_commutes", basis, atol);
    s.bound("left_mul.scalar_sum", sum, atol);
    s.bound("left_mul.surjective", solve, atol);
}

void finite_suite(Suite& s, const QOperator& A, const RunConfig& c, const std::string& prefix) {
    const Tolerances& tol = c.tol;
    const std::size_t n = A.dim();
    const LeftMul L = LeftMul::canonical(n);
    const double scale = scale_of(A);
    Rng rng(c.seed);
    const auto name = [&](const char* base) { return prefix + base; };

    s.bound(name("adjoint.involution"), max_entry_distance(adjoint(adjoint(A)), A), tol.atol);

    const QOperator Ad = adjoint(A);
    double adj = 0.0, lin = 0.0;
    for (std::size_t t = 0; t < kSamplePairs; ++t) {
        const QVector phi = rng.unit_vector(n);
        const QVector psi = rng.unit_vector(n);
        const Quaternion a = rng.quaternion();
        const Quaternion b = rng.quaternion();
        adj = std::max(adj, distance(inner(psi, A * phi), inner(Ad * psi, phi)) / scale);
        lin = std::max(lin, distance(A * (phi * a + psi * b), (A * phi) * a + (A * psi) * b) /
                                (scale * (1.0 + a.norm() + b.norm())));
    }
    s.bound(name("adjoint.identity"), adj, tol.atol);
    s.bound(name("operator.right_linear"), lin, tol.atol);

    {
        const ChiMatrix lhs = chi(A * Ad);
        const Eigen::MatrixXcd rhs = chi(A).m * chi(Ad).m;
        s.bound(name("embed.homomorphism"), (lhs.m - rhs).cwiseAbs().maxCoeff() / (scale * scale), tol.atol);
    }

    const Quaternion q = nonreal_q(c);
    s.guard(name("kernel.range_duality"), [&] {
        const QOperator B = shifted(A, L, q);
        const KernelBasis K = kernel_q(adjoint(B), tol.rank_tol);
        double worst = 0.0;
        for (const auto& k : K.vectors) {
            for (std::size_t m = 0; m < n; ++m) worst = std::max(worst, inner(k, B.column(m)).norm());
        }
        const bool dims = K.qdim + rank_q(B, tol.rank_tol) == n;
        s.expect(name("kernel.range_duality"), dims && worst <= 1e3 * tol.rank_tol * scale_of(B),
                 {{"kernel_qdim", K.qdim}, {"residual", worst}});
    });

    const SymmetryReport sym = symmetry_predicates(A, L);
    s.expect(name("symmetric"), sym.is_symmetric, {{"defect", sym.symmetric_defect}});
    if (!sym.is_symmetric) {
        s.skip(name("symmetric_suite"), "operator is not symmetric");
        left_mul_axioms(s, std::min<std::size_t>(std::max<std::size_t>(n, 2), 8), rng, tol.atol);
        return;
    }

    s.guard(name("criteria.agree"), [&] {
        const CriteriaReport r = criteria_report(A, L, Quaternion(1, 1, 1, 1), tol.rank_tol);
        json d = io::to_json(r);
        s.expect(name("criteria.agree"), r.agree(), d);
    });
    s.guard(name("spectrum.real_iff_self_adjoint"), [&] {
        const SelfAdjointVerdict v = selfadjoint_iff_real(A, L);
        s.expect(name("spectrum.real_iff_self_adjoint"), v.consistent && v.all_real == v.self_adjoint,
                 io::to_json(v));
    });
    s.guard(name("spectrum.kernels_verified"), [&] {
        const SpectrumReport r = point_sspectrum(A, tol.rank_tol);
        const bool ok = std::all_of(r.spheres.begin(), r.spheres.end(),
                                    [](const EigenSphere& e) { return e.kernel_verified; });
        s.expect(name("spectrum.kernels_verified"), ok, {{"spheres", r.spheres.size()}});
    });
    s.guard(name("resolvent.bound"), [&] {
        const ResolventBound r = resolvent_bound_check(A, q, kSamplePairs, c.seed);
        json d = io::to_json(r);
        s.expect(name("resolvent.bound"),
                 r.max_violation() <= kResolventTol && r.inverse_norm <= r.bound + kResolventTol, d);
    });
    s.guard(name("deficiency.finite_zero"), [&] {
        json d = json::object();
        bool ok = true;
        for (char u : {'i', 'j', 'k'}) {
            const auto [np, nm] = finite_deficiency_indices(A, L, u, tol.rank_tol);
            d[std::string(1, u)] = {np, nm};
            ok = ok && np == 0 && nm == 0;
        }
        s.expect(name("deficiency.finite_zero"), ok, d);
    });
    s.guard(name("von_neumann.trivial"), [&] {
        const DirectnessRecord r = von_neumann_evidence(A, L, q, tol.rank_tol);
        s.expect(name("von_neumann.trivial"), r.trivial && r.direct, io::to_json(r));
    });

    if (!sym.units_anti_symmetric()) {
        s.skip(name("real_symmetric_suite"), "iA, jA, kA are not all anti-symmetric");
    } else {
        const double qscale = std::pow(scale + q.norm(), 2);
        s.guard(name("norm_identity.unit"), [&] {
            s.bound(name("norm_identity.unit"),
                    norm_identity_check(A, L, Quaternion::i(), kSamplePairs, c.seed) / qscale,
                    tol.property_tol);
        });
        s.guard(name("norm_identity.general"), [&] {
            s.bound(name("norm_identity.general"),
                    norm_identity_check(A, L, q, kSamplePairs, c.seed) / qscale, tol.property_tol);
        });
        {
            const QOperator R = resolvent_poly(A, q);
            const QOperator P = shifted(A, L, q) * shifted(A, L, q.conj());
            const QOperator Q = shifted(A, L, q.conj()) * shifted(A, L, q);
            s.bound(name("resolvent.factorization"),
                    std::max(max_entry_distance(R, P), max_entry_distance(R, Q)) / qscale,
                    tol.property_tol);
        }
        s.guard(name("basis_invariance"), [&] {
            Rng brng(c.seed + 1);
            const Basis B2 = random_unitary_basis(brng, n);
            const std::size_t d = basis_invariance_check(A, B2, q, 10, c.seed, tol.rank_tol);
            s.expect(name("basis_invariance"), d == 0, {{"discrepancy", d}});
        });
    }
    left_mul_axioms(s, std::min<std::size_t>(std::max<std::size_t>(n, 2), 8), rng, tol.atol);
}

void banded_suite(Suite& s, const BandedOperator& A, const RunConfig& c) {
    const DeficiencyOptions opt = deficiency_options(c.tol);
    s.expect("symmetric", A.symmetric());
    if (!A.symmetric()) {
        s.skip("deficiency_suite", "operator is not symmetric");
        return;
    }

    std::vector<std::pair<std::size_t, std::size_t>> indices;
    for (char u : {'i', 'j', 'k'}) {
        const std::string nm = std::string("deficiency.") + u;
        s.guard(nm, [&] {
            const DeficiencyReport r = deficiency_indices(A, u, opt);
            const bool ok = r.status == DeficiencyStatus::ok && r.doubling_agrees &&
                            !r.infinite_suspected_plus && !r.infinite_suspected_minus;
            s.expect(nm, ok,
                     {{"n_plus", r.n_plus}, {"n_minus", r.n_minus}, {"doubling_agrees", r.doubling_agrees}});
            if (ok) indices.emplace_back(r.n_plus, r.n_minus);
        });
    }
    const bool same = indices.size() == 3 && indices[0] == indices[1] && indices[1] == indices[2];
    s.expect("deficiency.unit_independent", same);

    s.guard("deficiency.stability_scan", [&] {
        const StabilityRecord r = index_stability_scan(A, Quaternion::i(), kScanCount, opt, c.seed);
        const bool ok = r.all_equal && (indices.empty() || r.value == indices[0].first);
        s.expect("deficiency.stability_scan", ok, {{"value", r.value}, {"samples", r.entries.size()}});
    });

    s.guard("deficiency.scaling", [&] {
        const double lambda = 2.0;
        const KernelCount big = summable_kernel_dim(A, Quaternion::i() * lambda, opt);
        const KernelCount small = summable_kernel_dim(A.scaled(1.0 / lambda), Quaternion::i(), opt);
        s.expect("deficiency.scaling", big.conclusive && small.conclusive && big.dim == small.dim,
                 {{"lambda", lambda}, {"dim", big.dim}, {"scaled_dim", small.dim}});
    });

    s.guard("oracle.truncation", [&] {
        json d = json::array();
        bool ok = true;
        for (const Quaternion& q : {Quaternion::i(), -Quaternion::i(), Quaternion(1, 1, 1, 0)}) {
            const std::size_t rec = formal_solutions(A, q, kOracleDim).size();
            const std::size_t tr = truncated_kernel_qdim(A, q, kOracleDim, c.tol.rank_tol);
            d.push_back({{"q", to_string(q)}, {"recurrence", rec}, {"truncated", tr}});
            ok = ok && rec == tr;
        }
        s.expect("oracle.truncation", ok, {{"M", kOracleDim}, {"cases", d}});
    });

    for (const Quaternion& q : {Quaternion::i(), Quaternion(1, 1, 1, 0)}) {
        const std::string nm = "von_neumann.direct." + to_string(q);
        s.guard(nm, [&] {
            const DirectnessRecord r = von_neumann_evidence(A, q, opt);
            s.expect(nm, r.direct, io::to_json(r));
        });
    }

    finite_suite(s, A.truncate(kTruncationDim), c, "truncation.");
}

struct Outcome {
    json doc;
    bool passed = true;
};

Outcome do_verify(const Source& src, const RunConfig& c) {
    Suite s;
    json op;
    if (const auto* A = std::get_if<QOperator>(&src.op)) {
        finite_suite(s, *A, c, "");
        op = io::operator_to_json(*A);
    } else {
        const auto& B = std::get<BandedOperator>(src.op);
        banded_suite(s, B, c);
        op = io::banded_to_json(B);
    }
    return {{{"checks", s.checks()}, {"operator", op}, {"passed", s.passed()}}, s.passed()};
}

Outcome do_sspectrum(const Source& src, const RunConfig& c) {
    const auto* A = std::get_if<QOperator>(&src.op);
    if (!A) throw ConfigParse("sspectrum needs a finite matrix, '" + src.label + "' is banded");
    const SpectrumReport r = point_sspectrum(*A, c.tol.rank_tol);
    const bool ok = std::all_of(r.spheres.begin(), r.spheres.end(),
                                [](const EigenSphere& e) { return e.kernel_verified; });
    return {{{"spectrum", io::to_json(r)},
             {"eigenvalues_c", io::eigenvalues_to_json(eigenvalues_c(*A))},
             {"passed", ok}},
            ok};
}

Outcome do_deficiency(const Source& src, const RunConfig& c) {
    if (const auto* A = std::get_if<QOperator>(&src.op)) {
        const LeftMul L = LeftMul::canonical(A->dim());
        const auto [np, nm] = finite_deficiency_indices(*A, L, c.unit, c.tol.rank_tol);
        const SymmetryReport sym = symmetry_predicates(*A, L);
        return {{{"deficiency",
                  {{"unit", std::string(1, c.unit)},
                   {"n_plus", np},
                   {"n_minus", nm},
                   {"symmetric", sym.is_symmetric}}},
                 {"passed", sym.is_symmetric}},
                sym.is_symmetric};
    }
    const auto& B = std::get<BandedOperator>(src.op);
    const DeficiencyOptions opt = deficiency_options(c.tol);
    DeficiencyReport r = deficiency_indices(B, c.unit, opt);
    bool ok = r.status == DeficiencyStatus::ok && r.doubling_agrees;
    json extra = json::object();
    try {
        const Quaternion center = c.q && im_norm(*c.q) > 0.0 ? *c.q : unit_quaternion(c.unit);
        r.stability = index_stability_scan(B, center, kScanCount, opt, c.seed);
    } catch (const StabilityViolation& e) {
        ok = false;
        extra["stability_error"] = e.what();
    } catch (const PreconditionFailed& e) {
        extra["stability_skipped"] = e.what();
    }
    json d = io::to_json(r);
    d.update(extra);
    return {{{"deficiency", d}, {"passed", ok}}, ok};
}

Outcome do_invariance(const Source& src, const RunConfig& c) {
    const auto* A = std::get_if<QOperator>(&src.op);
    if (!A) throw ConfigParse("invariance needs a finite matrix, '" + src.label + "' is banded");
    const std::size_t n = A->dim();
    Rng rng(c.seed);
    const Basis B2 = random_unitary_basis(rng, n);
    const Quaternion q = nonreal_q(c);
    const std::size_t trials = 50;
    const std::size_t d = basis_invariance_check(*A, B2, q, trials, c.seed, c.tol.rank_tol);

    const LeftMul L1 = LeftMul::canonical(n);
    const LeftMul L2(B2);
    double iso = 0.0;
    for (std::size_t t = 0; t < 100; ++t) {
        const Quaternion p = rng.nonreal_quaternion();
        const QVector u = rng.vector(n);
        const QVector v = rng.vector(n);
        const Quaternion lhs = inner(delta_map(L1, L2, p, u), delta_map(L1, L2, p, v));
        iso = std::max(iso, distance(lhs, inner(u, v)) / (1.0 + u.norm() * v.norm()));
    }
    const bool ok = d == 0 && iso <= c.tol.atol;
    return {{{"invariance",
              {{"q", to_string(q)},
               {"trials", trials},
               {"discrepancy", d},
               {"delta_isometry_residual", iso},
               {"basis", B2.label()}}},
             {"passed", ok}},
            ok};
}

Outcome do_report(const Source& src, const RunConfig& c) {
    Outcome out{json::object(), true};
    const auto merge = [&](const char* key, Outcome part) {
        out.passed = out.passed && part.passed;
        out.doc[key] = std::move(part.doc);
    };
    merge("verify", do_verify(src, c));
    if (std::holds_alternative<QOperator>(src.op)) {
        merge("sspectrum", do_sspectrum(src, c));
        const auto& A = std::get<QOperator>(src.op);
        if (symmetry_predicates(A, LeftMul::canonical(A.dim())).units_anti_symmetric()) {
            merge("invariance", do_invariance(src, c));
        }
    }
    merge("deficiency", do_deficiency(src, c));
    out.doc["passed"] = out.passed;
    return out;
}

void render_checks_text(std::ostream& os, const json& checks) {
    for (const auto& ch : checks) {
        if (ch.contains("skipped")) {
            os << "  skip  " << ch["name"].get<std::string>() << " (" << ch["skipped"].get<std::string>() << ")\n";
        } else {
            os << "  " << (ch["passed"].get<bool>() ? "pass" : "FAIL") << "  " << ch["name"].get<std::string>();
            if (ch.contains("error")) os << " (" << ch["error"].get<std::string>() << ")";
            os << "\n";
        }
    }
}

std::string render_text(const json& doc) {
    std::ostringstream os;
    os << doc["command"].get<std::string>() << " " << doc["source"].get<std::string>() << "\n";
    if (doc.contains("error")) os << "error: " << doc["error"].get<std::string>() << "\n";
    const json& r = doc.contains("result") ? doc["result"] : json::object();
    const auto section = [&](const json& part) {
        if (part.contains("checks")) render_checks_text(os, part["checks"]);
        if (part.contains("spectrum")) {
            for (const auto& sp : part["spectrum"]["spheres"]) {
                os << "  sphere re=" << sp["re"].get<double>() << " |im|=" << sp["im_mag"].get<double>()
                   << " mult=" << sp["mult"].get<std::size_t>() << "\n";
            }
        }
        if (part.contains("deficiency")) {
            const json& d = part["deficiency"];
            os << "  deficiency indices (" << d["n_plus"].dump() << ", " << d["n_minus"].dump() << ")";
            if (d.contains("status")) os << " " << d["status"].get<std::string>();
            os << "\n";
        }
        if (part.contains("invariance")) {
            os << "  basis invariance discrepancy " << part["invariance"]["discrepancy"].dump() << "\n";
        }
    };
    if (!r.contains("verify")) section(r);
    for (const char* key : {"verify", "sspectrum", "deficiency", "invariance"}) {
        if (r.contains("verify") && r.contains(key)) {
            os << key << ":\n";
            section(r[key]);
        }
    }
    os << (doc.value("passed", false) ? "PASSED" : "FAILED") << "\n";
    return os.str();
}

std::string render_csv(const json& doc) {
    std::ostringstream os;
    if (doc.contains("error")) {
        os << "error\n" << json(doc["error"]).dump() << "\n";
        return os.str();
    }
    const json& r = doc["result"];
    if (r.contains("spectrum")) {
        os << "re,im_mag,mult\n";
        for (const auto& sp : r["spectrum"]["spheres"]) {
            os << sp["re"].dump() << "," << sp["im_mag"].dump() << "," << sp["mult"].dump() << "\n";
        }
        return os.str();
    }
    if (r.contains("deficiency") && !r.contains("verify")) {
        const json& d = r["deficiency"];
        os << "unit,n_plus,n_minus\n"
           << d["unit"].get<std::string>() << "," << d["n_plus"].dump() << "," << d["n_minus"].dump() << "\n";
        return os.str();
    }
    const json& checks = r.contains("checks") ? r["checks"] : r.value("verify", json::object()).value("checks", json::array());
    os << "check,passed\n";
    for (const auto& ch : checks) {
        os << ch["name"].get<std::string>() << ","
           << (ch.contains("skipped") ? "skipped" : (ch["passed"].get<bool>() ? "true" : "false")) << "\n";
    }
    return os.str();
}

std::string render(const json& doc, Format f) {
    switch (f) {
    case Format::json: return doc.dump(2) + "\n";
    case Format::text: return render_text(doc);
    case Format::csv: return render_csv(doc);
    }
    return {};
}

void set_size(std::size_t& dst, const json& v, const char* key) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ConfigParse(std::string("tolerance '") + key + "' must be a positive integer");
    }
    dst = v.get<std::size_t>();
}

void set_positive(double& dst, const json& v, const char* key) {
    if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ConfigParse(std::string("tolerance '") + key + "' must be a positive number");
    }
    dst = v.get<double>();
}

struct RawArgs {
    std::string command;
    std::string preset;
    std::string matrix;
    std::string q;
    std::string unit = "i";
    std::size_t N = 0;
    std::size_t window = 0;
    std::uint64_t seed = 0;
    std::size_t dim = 6;
    std::string format = "json";
    std::string out;
};

void build_app(CLI::App& app, RawArgs& a) {
    app.add_option("command", a.command, "verify | sspectrum | deficiency | invariance | report")
        ->required()
        ->check(CLI::IsMember({"verify", "sspectrum", "deficiency", "invariance", "report"}));
    app.add_option("--preset", a.preset,
                   "real_symmetric, hermitian_random, left_scalar_i, diag_1_2, "
                   "number_operator, free_jacobi, jacobi_sq");
    app.add_option("--matrix", a.matrix, "operator config (JSON)");
    app.add_option("--q", a.q, "quaternion literal, e.g. 1-2i+0.5k");
    app.add_option("--unit", a.unit, "imaginary unit for deficiency indices")
        ->check(CLI::IsMember({"i", "j", "k"}));
    app.add_option("--N", a.N, "recurrence length");
    app.add_option("--window", a.window, "block length for summability fits");
    app.add_option("--seed", a.seed, "sampling seed");
    app.add_option("--dim", a.dim, "dimension of random finite presets")->check(CLI::PositiveNumber);
    app.add_option("--format", a.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", a.out, "write the report here instead of stdout");
}

} // namespace

void apply_tolerance_overrides(Tolerances& tol, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigParse(std::string("QDEF_TOL_OVERRIDES is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigParse("QDEF_TOL_OVERRIDES must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "atol") set_positive(tol.atol, *it, "atol");
        else if (k == "rank_tol") set_positive(tol.rank_tol, *it, "rank_tol");
        else if (k == "ratio") set_positive(tol.ratio, *it, "ratio");
        else if (k == "property_tol") set_positive(tol.property_tol, *it, "property_tol");
        else if (k == "window") set_size(tol.window, *it, "window");
        else if (k == "N") set_size(tol.N, *it, "N");
        else throw ConfigParse("unknown tolerance '" + k + "'");
    }
}

RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app("qdef");
    RawArgs a;
    build_app(app, a);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        throw ConfigParse(e.what());
    }

    RunConfig c;
    static const std::map<std::string, Command> commands{{"verify", Command::verify},
                                                         {"sspectrum", Command::sspectrum},
                                                         {"deficiency", Command::deficiency},
                                                         {"invariance", Command::invariance},
                                                         {"report", Command::report}};
    c.command = commands.at(a.command);
    c.preset = a.preset;
    c.matrix_path = a.matrix;
    if (!a.q.empty()) c.q = parse_quaternion(a.q);
    c.unit = a.unit.front();
    c.seed = a.seed;
    c.dim = a.dim;
    c.format = a.format == "csv" ? Format::csv : a.format == "text" ? Format::text : Format::json;
    c.out_path = a.out;

    if (const char* env = std::getenv("QDEF_TOL_OVERRIDES"); env && *env) {
        apply_tolerance_overrides(c.tol, env);
    }
    if (app.count("--N")) {
        if (a.N == 0) throw ConfigParse("--N must be positive");
        c.tol.N = a.N;
    }
    if (app.count("--window")) {
        if (a.window == 0) throw ConfigParse("--window must be positive");
        c.tol.window = a.window;
    }
    return c;
}

RunResult run(const RunConfig& config) {
    json doc = {{"command", command_name(config.command)},
                {"seed", config.seed},
                {"tolerances", tolerances_json(config.tol)},
                {"unit", std::string(1, config.unit)}};
    if (config.q) doc["q"] = to_string(*config.q);

    RunResult res;
    std::optional<Source> src;
    try {
        src = load_source(config);
        doc["source"] = src->label;
        Outcome out;
        switch (config.command) {
        case Command::verify: out = do_verify(*src, config); break;
        case Command::sspectrum: out = do_sspectrum(*src, config); break;
        case Command::deficiency: out = do_deficiency(*src, config); break;
        case Command::invariance: out = do_invariance(*src, config); break;
        case Command::report: out = do_report(*src, config); break;
        }
        doc["result"] = std::move(out.doc);
        doc["passed"] = out.passed;
        res.exit_code = out.passed ? kExitPass : kExitPropertyFailure;
    } catch (const ConfigParse& e) {
        doc["error"] = std::string("config error: ") + e.what();
        doc["passed"] = false;
        res.exit_code = kExitConfigError;
    } catch (const Error& e) {
        doc["error"] = e.what();
        doc["passed"] = false;
        res.exit_code = kExitPropertyFailure;
    }
    if (!doc.contains("source")) {
        doc["source"] = config.matrix_path.empty() ? config.preset : config.matrix_path;
    }
    if (doc.contains("error") && src) doc["error"] = "operator '" + src->label + "': " + doc["error"].get<std::string>();
    res.output = render(doc, config.format);
    return res;
}

int main_entry(int argc, const char* const* argv) {
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a == "-h" || a == "--help") {
            CLI::App app("qdef: quaternionic operator verification");
            RawArgs raw;
            build_app(app, raw);
            std::cout << app.help();
            return kExitPass;
        }
    }
    RunConfig config;
    try {
        config = parse_args(argc, argv);
    } catch (const ConfigParse& e) {
        std::cerr << "qdef: " << e.what() << "\n";
        return kExitConfigError;
    }
    const RunResult res = run(config);
    if (config.out_path.empty()) {
        std::cout << res.output;
    } else {
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f) {
            std::cerr << "qdef: cannot write '" << config.out_path << "'\n";
            return kExitConfigError;
        }
        f << res.output;
    }
    if (res.exit_code == kExitConfigError) std::cerr << "qdef: configuration error\n";
    return res.exit_code;
}

} // namespace qdef::cli
