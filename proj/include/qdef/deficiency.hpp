#pragma once

#include "qdef/embed.hpp"
#include "qdef/qoperator.hpp"
#include "qdef/quat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qdef {

/// Semi-infinite banded operator on finitely supported sequences. Entry
/// A_{n, n+d} for |d| <= bandwidth is a polynomial in n with quaternion
/// coefficients; entries that would fall at a negative column are zero.
class BandedOperator {
public:
    /// offsets maps d to ascending-power coefficients of A_{n, n+d}.
    BandedOperator(std::size_t bandwidth, std::map<int, std::vector<Quaternion>> offsets,
                   std::string description);

    static BandedOperator number_operator();
    static BandedOperator free_jacobi();
    static BandedOperator jacobi_sq();
    /// Throws ConfigParse for an unknown name.
    static BandedOperator preset(const std::string& name);

    std::size_t bandwidth() const { return bandwidth_; }
    const std::string& description() const { return description_; }
    const std::map<int, std::vector<Quaternion>>& offsets() const { return offsets_; }

    /// A_{n, n+d}.
    Quaternion coeff(std::size_t n, int d) const;
    /// Formal adjoint entry (A^dagger)_{n, n+d} = conj(A_{n+d, n}).
    Quaternion adjoint_coeff(std::size_t n, int d) const;

    /// Sampled over the first kSampleRows rows.
    bool symmetric() const { return symmetric_; }
    bool real_entries() const { return real_entries_; }

    /// Same band with every entry multiplied by s.
    BandedOperator scaled(double s) const;
    /// Leading M x M block of the formal matrix.
    QMatrix truncate(std::size_t M) const;
    /// Leading M x M block of the formal adjoint.
    QMatrix truncate_adjoint(std::size_t M) const;

    static constexpr std::size_t kSampleRows = 256;

private:
    std::size_t bandwidth_;
    std::map<int, std::vector<Quaternion>> offsets_;
    std::string description_;
    bool symmetric_ = false;
    bool real_entries_ = false;
};

/// Truncated solution c_0..c_{N-1} of (A^dagger - qI) c = 0. Values are stored
/// as mantissas with a per-index natural-log scale: c_n = coeffs[n] * exp(log_scale[n]).
struct FormalSolution {
    std::vector<Quaternion> coeffs;
    std::vector<double> log_scale;
    Quaternion q;
    std::size_t seed_slot = 0;
    /// Normwise per-block gap between the double and extended-precision runs.
    double precision_discrepancy = 0.0;
    /// Largest relative residual of the interior recurrence rows.
    double recurrence_residual = 0.0;

    std::size_t size() const { return coeffs.size(); }
    /// log |c_n|^2, -inf for an exact zero.
    double log_abs2(std::size_t n) const;
    /// c_n rescaled by exp(-shift).
    Quaternion scaled_value(std::size_t n, double shift) const;
};

/// Synthetic solution from plain coefficients (unit scale).
FormalSolution make_solution(std::vector<Quaternion> coeffs, const Quaternion& q = {});

struct DeficiencyOptions {
    std::size_t N = 2000;
    std::size_t window = 100;
    /// Geometric block-ratio threshold: growth >= 1 + ratio_tol is divergent.
    double ratio_tol = 1e-3;
    /// Block energies decaying faster than n^{-1 - slope_margin} are summable,
    /// slower than n^{-1 + slope_margin} divergent.
    double slope_margin = 0.1;
    /// Double vs extended-precision gap above which a verdict is inconclusive.
    double precision_tol = 1e-6;
    double rank_tol = kDefaultRankTol;
    /// Re-run at 2N and require identical verdicts.
    bool check_doubling = true;
};

/// Seeds each free slot with 1 and forward-solves the band recurrence; for
/// bandwidth 0 returns one solution per row n < N with A_{nn} = q. Throws
/// PreconditionFailed (N < 10 w) and SingularLeadingCoefficient.
std::vector<FormalSolution> formal_solutions(const BandedOperator& A, const Quaternion& q,
                                             std::size_t N);

enum class Summability { square_summable, divergent, inconclusive };
const char* to_string(Summability s);

struct SummabilityFit {
    Summability verdict = Summability::inconclusive;
    /// Slope of log block energy against log n.
    double power_slope = 0.0;
    /// Mean log ratio between consecutive block energies.
    double log_block_ratio = 0.0;
    std::size_t blocks_used = 0;
};

/// Classifies log block energies (one per block, ascending n) of a sequence.
/// Uses the trailing half of the blocks and requires its second half to agree.
SummabilityFit classify_block_energies(const std::vector<double>& log_energies,
                                       const std::vector<double>& block_centers,
                                       const DeficiencyOptions& opt);

/// Needs at least 4 windows of coefficients, otherwise inconclusive.
SummabilityFit classify_l2(const FormalSolution& sol, std::size_t window,
                           const DeficiencyOptions& opt = {});

struct SolutionEvidence {
    int sign = +1; // +1: ker(A^dagger - eI), -1: ker(A^dagger + eI)
    Quaternion q;
    std::size_t direction = 0;
    SummabilityFit fit;
    double precision_discrepancy = 0.0;
};

struct KernelCount {
    std::size_t dim = 0;
    bool conclusive = true;
    std::vector<SolutionEvidence> evidence;
    double max_residual = 0.0;
};

/// Dimension of the square-summable part of ker(A^dagger - qI).
KernelCount summable_kernel_dim(const BandedOperator& A, const Quaternion& q,
                                const DeficiencyOptions& opt, int sign = +1);

struct StabilityEntry {
    Quaternion q;
    std::size_t dim = 0;
    bool conclusive = true;
};

struct StabilityRecord {
    Quaternion center;
    std::vector<StabilityEntry> entries;
    bool all_equal = false;
    std::size_t value = 0;
};

enum class DeficiencyStatus { ok, inconclusive };

struct DeficiencyReport {
    std::string description;
    char unit = 'i';
    std::size_t bandwidth = 0;
    DeficiencyStatus status = DeficiencyStatus::ok;
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
    bool infinite_suspected_plus = false;
    bool infinite_suspected_minus = false;
    /// (n+, n-) = (0, 0) with a conclusive status.
    bool self_adjoint = false;
    /// Entries are not all real, so iA, jA, kA anti-symmetry is not guaranteed.
    bool hypotheses_unmet = false;
    /// Verdicts identical at N and 2N (always true when the check is disabled).
    bool doubling_agrees = true;
    std::vector<SolutionEvidence> evidence;
    std::optional<StabilityRecord> stability;
    DeficiencyOptions options;
};

/// unit is one of 'i', 'j', 'k'. Throws PreconditionFailed for a non-symmetric
/// operator or an unknown unit.
DeficiencyReport deficiency_indices(const BandedOperator& A, char unit,
                                    const DeficiencyOptions& opt = {});

/// Samples count nonreal q: half inside B(center, 0.75 |Im center|), half on
/// the axes {i, j, k} scaled by lambda in +-[0.5, 3]. Throws PreconditionFailed
/// (real center or complex entries) and StabilityViolation when the
/// square-summable kernel dimension is not constant.
StabilityRecord index_stability_scan(const BandedOperator& A, const Quaternion& center,
                                     std::size_t count, const DeficiencyOptions& opt,
                                     std::uint64_t seed);

struct DirectnessRecord {
    Quaternion q;
    std::size_t k_plus = 0;  // dim ker(A^dagger - qI)
    std::size_t k_minus = 0; // dim ker(A^dagger - conj(q) I)
    /// Minimum eigenvalue of the Gram matrix of the normalized union; 1 when empty.
    double gram_min_eigenvalue = 1.0;
    /// Smallest distance from a unit vector of span K+ to span K-; 1 when either is empty.
    double min_distance = 1.0;
    bool direct = false;
    /// Both kernels empty, so D(A^dagger) = D(A).
    bool trivial = false;
};

/// Kernels from square-summable formal solutions truncated at opt.N.
DirectnessRecord von_neumann_evidence(const BandedOperator& A, const Quaternion& q,
                                      const DeficiencyOptions& opt = {});
/// Finite version: kernels of A^dagger - qI, A^dagger - conj(q) I through chi.
DirectnessRecord von_neumann_evidence(const QOperator& A, const LeftMul& L, const Quaternion& q,
                                      double rank_tol = kDefaultRankTol);

/// (qdim ker(A^dagger - eI), qdim ker(A^dagger + eI)) for a finite matrix.
std::pair<std::size_t, std::size_t> finite_deficiency_indices(const QOperator& A, const LeftMul& L,
                                                              char unit,
                                                              double rank_tol = kDefaultRankTol);

/// qdim of the kernel of the M x M truncation of A^dagger - qI with its last
/// `bandwidth` rows removed (those rows reach past the truncation).
std::size_t truncated_kernel_qdim(const BandedOperator& A, const Quaternion& q, std::size_t M,
                                  double rank_tol = kDefaultRankTol);

/// Max over trials of |dim ran(A - q.I)^perp - dim ran(A - q*I)^perp|, where
/// "." uses the canonical basis and "*" uses B2. Trial 0 uses q; later trials
/// use random points of the sphere of q. Throws PreconditionFailed.
std::size_t basis_invariance_check(const QOperator& A, const Basis& B2, const Quaternion& q,
                                   std::size_t trials, std::uint64_t seed,
                                   double rank_tol = kDefaultRankTol);

Quaternion unit_quaternion(char unit);

} // namespace qdef
