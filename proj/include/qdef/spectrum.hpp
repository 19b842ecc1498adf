#pragma once

#include "qdef/embed.hpp"
#include "qdef/qoperator.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace qdef {

inline constexpr double kRealEigenTol = 1e-9;
inline constexpr double kPairingTol = 1e-8;
inline constexpr double kRealSpectrumTol = 1e-8;

/// Similarity sphere {re + u im_mag : u unit imaginary}. im_mag == 0 is a real point.
struct EigenSphere {
    double re = 0.0;
    double im_mag = 0.0;
    std::size_t multiplicity = 0;
    /// ker R_q(A) was confirmed nontrivial at the representative q = re + i im_mag.
    bool kernel_verified = false;

    Quaternion representative() const { return {re, im_mag, 0.0, 0.0}; }
};

struct SpectrumReport {
    std::vector<EigenSphere> spheres;
    bool all_real = false;
    double max_im_mag = 0.0;
    std::string note;
};

/// Spheres ordered by (re, im_mag). In finite dimension the whole S-spectrum is
/// point spectrum; the report notes that the residual and continuous parts are empty.
SpectrumReport point_sspectrum(const QOperator& A, double rank_tol = kDefaultRankTol);

struct SelfAdjointVerdict {
    bool self_adjoint = false;
    bool all_real = false;
    /// A symmetric with iA, jA, kA anti-symmetric.
    bool hypotheses_met = false;
    double max_im_mag = 0.0;
    /// self_adjoint => all_real, and under the hypotheses all_real => self_adjoint.
    bool consistent = false;
};

/// With require_converse set, throws PreconditionFailed unless the hypotheses hold.
SelfAdjointVerdict selfadjoint_iff_real(const QOperator& A, const LeftMul& L,
                                        bool require_converse = false);

struct ResolventBound {
    double bound = 0.0;              // 1 / |Im q|^2
    double inverse_norm = 0.0;       // ||R_q(A)^{-1}|| from singular values
    double sampled_violation = 0.0;  // max(0, ||x|| |Im q|^2 / ||psi|| - 1) over solves
    double lower_bound_violation = 0.0; // max(0, 1 - ||R phi|| / (|Im q|^2 ||phi||))

    double max_violation() const { return std::max(sampled_violation, lower_bound_violation); }
};

/// Requires A symmetric and q nonreal (PreconditionFailed). Throws
/// SingularSystem if q lies numerically on the spectrum.
ResolventBound resolvent_bound_check(const QOperator& A, const Quaternion& q, std::size_t samples,
                                     std::uint64_t seed);

/// "re,im_mag,mult" rows with a header line.
std::string spheres_csv(const SpectrumReport& report);

} // namespace qdef
