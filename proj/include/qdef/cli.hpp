#pragma once

#include "qdef/quat.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace qdef::cli {

enum class Command { verify, sspectrum, deficiency, invariance, report };
enum class Format { json, csv, text };

struct Tolerances {
    double atol = 1e-12;
    double rank_tol = 1e-10;
    double ratio = 1e-3;
    std::size_t window = 100;
    std::size_t N = 2000;
    /// Residual bound for the norm and factorization identities.
    double property_tol = 1e-10;
};

struct RunConfig {
    Command command = Command::verify;
    std::string preset;
    std::string matrix_path;
    std::optional<Quaternion> q;
    char unit = 'i';
    std::uint64_t seed = 0;
    /// Dimension for the random finite presets.
    std::size_t dim = 6;
    Tolerances tol;
    Format format = Format::json;
    std::string out_path;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Applies a JSON object of tolerance overrides (keys as in Tolerances).
/// Throws ConfigParse.
void apply_tolerance_overrides(Tolerances& tol, const std::string& json_text);

/// Parses argv (argv[1] is the subcommand). QDEF_TOL_OVERRIDES is applied
/// before explicit flags. Throws ConfigParse.
RunConfig parse_args(int argc, const char* const* argv);

struct RunResult {
    int exit_code = kExitPass;
    std::string output;
};

/// Never throws for library or config errors; those map to exit codes 1 and 2.
RunResult run(const RunConfig& config);

/// parse_args + run + write to --out or stdout. Returns the process exit code.
int main_entry(int argc, const char* const* argv);

} // namespace qdef::cli
