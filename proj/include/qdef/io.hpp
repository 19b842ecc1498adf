#pragma once

#include "qdef/deficiency.hpp"
#include "qdef/qoperator.hpp"
#include "qdef/spectrum.hpp"

#include <json.hpp>

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace qdef::io {

using json = nlohmann::json;

/// Reads a file into a JSON document. Throws ConfigParse.
json load_json_file(const std::string& path);

/// Quaternion from a literal string or a plain number.
Quaternion quaternion_from_json(const json& j);
json quaternion_to_json(const Quaternion& q);

/// {"dim": n, "entries": [row-major quaternion literals]}.
QOperator operator_from_json(const json& j);
json operator_to_json(const QOperator& A);

/// {"bandwidth": w, "coeff": {"type": "poly", "offset_<d>": [...]}, "real_entries": bool}.
/// A declared real_entries flag must match the coefficients.
BandedOperator banded_from_json(const json& j);
json banded_to_json(const BandedOperator& A);

/// Array of vectors, each an array of quaternion literals; validated on load.
Basis basis_from_json(const json& j, const std::string& label = "config");

/// Either kind of operator, chosen by the presence of "bandwidth".
using AnyOperator = std::variant<QOperator, BandedOperator>;
AnyOperator any_operator_from_json(const json& j);

json to_json(const SpectrumReport& r);
json to_json(const SelfAdjointVerdict& v);
json to_json(const CriteriaReport& r);
json to_json(const ResolventBound& r);
json to_json(const SummabilityFit& f);
json to_json(const DeficiencyOptions& o);
json to_json(const StabilityRecord& r);
json to_json(const DirectnessRecord& r);
json to_json(const DeficiencyReport& r);
/// [[re, im], ...].
json eigenvalues_to_json(const std::vector<std::complex<double>>& ev);

} // namespace qdef::io
