#include "qdef/io.hpp"

#include "qdef/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qdef::io {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParse("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigParse("'" + path + "' is not valid JSON: " + e.what());
    }
}

Quaternion quaternion_from_json(const json& j) {
    if (j.is_number()) return Quaternion(j.get<double>());
    if (j.is_string()) return parse_quaternion(j.get<std::string>());
    throw ConfigParse("expected a quaternion literal, got " + j.dump());
}

json quaternion_to_json(const Quaternion& q) { return to_string(q); }

namespace {

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigParse(std::string("missing key '") + key + "'");
    return j.at(key);
}

std::size_t require_size(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigParse(std::string("'") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

json fit_json(const SummabilityFit& f) {
    const auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"verdict", to_string(f.verdict)},
            {"power_slope", finite_or_null(f.power_slope)},
            {"log_block_ratio", finite_or_null(f.log_block_ratio)},
            {"blocks_used", f.blocks_used}};
}

} // namespace

QOperator operator_from_json(const json& j) {
    const std::size_t n = require_size(j, "dim");
    const json& e = require(j, "entries");
    if (!e.is_array() || e.size() != n * n) {
        throw ConfigParse("'entries' must hold dim*dim = " + std::to_string(n * n) + " literals");
    }
    std::vector<Quaternion> data;
    data.reserve(n * n);
    for (const auto& x : e) data.push_back(quaternion_from_json(x));
    return QOperator(n, n, std::move(data));
}

json operator_to_json(const QOperator& A) {
    json entries = json::array();
    for (const auto& x : A.data()) entries.push_back(quaternion_to_json(x));
    return {{"dim", A.dim()}, {"entries", entries}};
}

BandedOperator banded_from_json(const json& j) {
    const std::size_t w = require_size(j, "bandwidth");
    const json& coeff = require(j, "coeff");
    if (coeff.value("type", std::string()) != "poly") {
        throw ConfigParse("only polynomial coefficient generators (\"type\": \"poly\") are supported");
    }
    std::map<int, std::vector<Quaternion>> offsets;
    for (auto it = coeff.begin(); it != coeff.end(); ++it) {
        const std::string& key = it.key();
        if (key == "type") continue;
        if (key.rfind("offset_", 0) != 0) throw ConfigParse("unexpected coefficient key '" + key + "'");
        int d = 0;
        try {
            std::size_t used = 0;
            d = std::stoi(key.substr(7), &used);
            if (used != key.size() - 7) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ConfigParse("bad offset key '" + key + "'");
        }
        if (!it.value().is_array()) throw ConfigParse("'" + key + "' must be an array");
        std::vector<Quaternion> poly;
        for (const auto& c : it.value()) poly.push_back(quaternion_from_json(c));
        offsets[d] = std::move(poly);
    }
    const std::string desc = j.value("description", std::string("config"));
    try {
        BandedOperator A(w, std::move(offsets), desc);
        if (j.contains("real_entries") && j.at("real_entries").get<bool>() != A.real_entries()) {
            throw ConfigParse("declared real_entries does not match the coefficients");
        }
        return A;
    } catch (const PreconditionFailed& e) {
        throw ConfigParse(e.what());
    }
}

json banded_to_json(const BandedOperator& A) {
    json coeff = {{"type", "poly"}};
    for (const auto& [d, poly] : A.offsets()) {
        json arr = json::array();
        for (const auto& c : poly) arr.push_back(quaternion_to_json(c));
        coeff["offset_" + std::to_string(d)] = arr;
    }
    return {{"bandwidth", A.bandwidth()},
            {"coeff", coeff},
            {"real_entries", A.real_entries()},
            {"symmetric", A.symmetric()},
            {"description", A.description()}};
}

Basis basis_from_json(const json& j, const std::string& label) {
    if (!j.is_array()) throw ConfigParse("basis must be an array of vectors");
    std::vector<QVector> vs;
    for (const auto& row : j) {
        if (!row.is_array()) throw ConfigParse("basis vectors must be arrays of literals");
        QVector v(row.size());
        for (std::size_t k = 0; k < row.size(); ++k) v[k] = quaternion_from_json(row[k]);
        vs.push_back(std::move(v));
    }
    try {
        return Basis(std::move(vs), label);
    } catch (const Error& e) {
        throw ConfigParse(std::string("invalid basis: ") + e.what());
    }
}

AnyOperator any_operator_from_json(const json& j) {
    if (j.is_object() && j.contains("bandwidth")) return banded_from_json(j);
    return operator_from_json(j);
}

json to_json(const SpectrumReport& r) {
    json spheres = json::array();
    for (const auto& s : r.spheres) {
        spheres.push_back({{"re", s.re}, {"im_mag", s.im_mag}, {"mult", s.multiplicity},
                           {"kernel_verified", s.kernel_verified}});
    }
    return {{"spheres", spheres}, {"all_real", r.all_real}, {"max_im_mag", r.max_im_mag}, {"note", r.note}};
}

json to_json(const SelfAdjointVerdict& v) {
    return {{"self_adjoint", v.self_adjoint},
            {"all_real", v.all_real},
            {"hypotheses_met", v.hypotheses_met},
            {"max_im_mag", v.max_im_mag},
            {"consistent", v.consistent}};
}

json to_json(const CriteriaReport& r) {
    return {{"self_adjoint", r.self_adjoint},
            {"kernels_trivial", r.kernels_trivial},
            {"ranges_full", r.ranges_full},
            {"general_q", to_string(r.general_q)},
            {"general_self_adjoint", r.general_self_adjoint},
            {"general_kernels_trivial", r.general_kernels_trivial},
            {"general_ranges_full", r.general_ranges_full},
            {"hypotheses_met", r.hypotheses_met},
            {"agree", r.agree()},
            {"max_defect", r.max_defect}};
}

json to_json(const ResolventBound& r) {
    return {{"bound", r.bound},
            {"inverse_norm", r.inverse_norm},
            {"sampled_violation", r.sampled_violation},
            {"lower_bound_violation", r.lower_bound_violation}};
}

json to_json(const SummabilityFit& f) { return fit_json(f); }

json to_json(const DeficiencyOptions& o) {
    return {{"N", o.N},
            {"window", o.window},
            {"ratio", o.ratio_tol},
            {"slope_margin", o.slope_margin},
            {"precision_tol", o.precision_tol},
            {"rank_tol", o.rank_tol},
            {"check_doubling", o.check_doubling}};
}

json to_json(const StabilityRecord& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"q", to_string(e.q)}, {"dim", e.dim}, {"conclusive", e.conclusive}});
    }
    return {{"center", to_string(r.center)}, {"entries", entries}, {"all_equal", r.all_equal}, {"value", r.value}};
}

json to_json(const DirectnessRecord& r) {
    return {{"q", to_string(r.q)},
            {"k_plus", r.k_plus},
            {"k_minus", r.k_minus},
            {"gram_min_eigenvalue", r.gram_min_eigenvalue},
            {"min_distance", r.min_distance},
            {"direct", r.direct},
            {"trivial", r.trivial}};
}

json to_json(const DeficiencyReport& r) {
    json evidence = json::array();
    for (const auto& e : r.evidence) {
        evidence.push_back({{"sign", e.sign},
                            {"q", to_string(e.q)},
                            {"direction", e.direction},
                            {"fit", fit_json(e.fit)},
                            {"precision_discrepancy", e.precision_discrepancy}});
    }
    const auto index = [](std::size_t n, bool suspected) {
        return suspected ? json("inf-suspected") : json(n);
    };
    json out = {{"operator", r.description},
                {"unit", std::string(1, r.unit)},
                {"bandwidth", r.bandwidth},
                {"status", r.status == DeficiencyStatus::ok ? "ok" : "inconclusive"},
                {"n_plus", index(r.n_plus, r.infinite_suspected_plus)},
                {"n_minus", index(r.n_minus, r.infinite_suspected_minus)},
                {"self_adjoint", r.self_adjoint},
                {"hypotheses_unmet", r.hypotheses_unmet},
                {"doubling_agrees", r.doubling_agrees},
                {"evidence", evidence},
                {"options", to_json(r.options)}};
    if (r.stability) out["stability"] = to_json(*r.stability);
    return out;
}

json eigenvalues_to_json(const std::vector<std::complex<double>>& ev) {
    json arr = json::array();
    for (const auto& z : ev) arr.push_back({z.real() + 0.0, z.imag() + 0.0});
    return arr;
}

} // namespace qdef::io
