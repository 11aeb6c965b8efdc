#ifndef SGDOM_ANALYSIS_HPP
#define SGDOM_ANALYSIS_HPP

#include "sgdom/lti.hpp"
#include "sgdom/sgraph.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sgdom {

/// Frequency and tau grids plus budgets for the separation sweep.
struct SweepConfig {
    /// Sorted nonnegative frequencies; includes 0 and the kOmegaInf
    /// sentinel by default.
    std::vector<double> omegas;
    /// Scaling factors in (0, 1], includes 1.
    std::vector<double> taus;
    CloudConfig cloud;
    /// Separation threshold: the sweep certifies only margins above it.
    double eps = 1e-6;
    /// Numerical tolerance for pole clustering and cancellation.
    double tol = 1e-8;
    bool parallel = true;
    bool run_oracle = true;

    /// {0} + interior_points log-spaced values on [wmin, wmax] + {inf}.
    static std::vector<double> omega_grid(double wmin, double wmax, int interior_points);

    /// Uniform grid from 0.05 to 1 with the given number of points.
    static std::vector<double> tau_grid(int points);

    /// 400 interior frequencies on [1e-3, 1e3], 20 tau points, cloud
    /// budget N=2000 / 200 refinement steps, eps 1e-6, tol 1e-8.
    static SweepConfig defaults();
};

enum class Verdict { certified, separation_failed, assumption_failed };

std::string to_string(Verdict v);

/// Argmin record of a separation sweep.
struct WorstPoint {
    double omega = 0.0;
    double tau = 1.0;
    double distance = std::numeric_limits<double>::infinity();
    Complex z1;
    Complex z2;
};

struct SeparationResult {
    bool holds = false;
    /// Set when the margin falls within 10*eps of the threshold.
    bool marginal = false;
    /// Smallest distance between the tau-scaled plant cloud and the
    /// inverse controller cloud over the whole grid.
    double margin = 0.0;
    WorstPoint worst;
    /// Frequencies where the controller response was zero, making the
    /// separation condition vacuous there.
    int vacuous_frequencies = 0;
};

struct DominanceReport {
    int p1 = 0;
    int p2 = 0;
    bool well_posed = false;
    bool no_cancellation = false;
    SeparationResult separation;
    Verdict verdict = Verdict::assumption_failed;
    /// p1 + p2 when certified, -1 otherwise.
    int claimed = -1;
    bool oracle_ran = false;
    int oracle_p = -1;
    bool oracle_agrees = false;
    /// Dominance margin: the sweep margin when separation holds, else 0.
    double margin = 0.0;
    /// The graphical verdict is sampled; the oracle is the authority.
    std::string honesty = "sampled-sound";
};

/// Raised when a certified graphical verdict contradicts the oracle
/// count, which means the sweep was under-sampled.
class oracle_mismatch_error : public std::runtime_error {
public:
    oracle_mismatch_error(const std::string& msg, int graphical, int oracle)
        : std::runtime_error(msg), graphical_p(graphical), oracle_p(oracle) {}

    int graphical_p;
    int oracle_p;
};

/// Disk-valued uncertainty region, one disk per sweep frequency. A disk
/// with a complex center is read together with its mirror image, so the
/// region stays symmetric about the real axis.
struct UncertaintyRegion {
    std::vector<Complex> centers;
    std::vector<double> radii;
};

struct CorollaryReport {
    bool small_gain = false;
    bool small_phase = false;
    bool passivity = false;
    double worst_gain_product = 0.0;
    double worst_gain_omega = 0.0;
    double worst_phase_sum = 0.0;
    double worst_phase_omega = 0.0;
    double worst_p_herm_min = 0.0;
    double worst_p_herm_omega = 0.0;
    double worst_c_herm_max = 0.0;
    double worst_c_herm_omega = 0.0;
};

/// Frequency/tau sweep of the separation condition between SG(tau P)
/// and SG-inverse(C). Frequencies are independent work items; the
/// reported minimum and argmin are identical for the serial and
/// parallel paths.
SeparationResult sweep_separation(const FeedbackLoop& loop, const SweepConfig& cfg);

/// Full graphical dominance test: open-loop indices, loop assumptions,
/// separation sweep, verdict, and (when the assumptions hold) the exact
/// oracle count. A certified verdict that contradicts the oracle throws
/// oracle_mismatch_error.
DominanceReport dominance_theorem(const FeedbackLoop& loop, const SweepConfig& cfg);

/// The dominance margin: the sweep margin when separation holds, 0
/// otherwise.
double dominance_margin(const FeedbackLoop& loop, const SweepConfig& cfg);

/// Small-gain, small-phase, and passivity conditions checked per grid
/// frequency with exact matrix statistics.
CorollaryReport corollary_checks(const FeedbackLoop& loop, const SweepConfig& cfg);

/// Robust dominance under additive disk uncertainty: the inverse cloud
/// of the p-dominant nominal system must clear every tau-scaled disk,
/// tau in [0,1]. Throws when the region grid does not match the sweep
/// grid or the nominal system is not p-dominant.
bool robust_additive(const TransferMatrix& nominal, int p, const UncertaintyRegion& region,
                     const SweepConfig& cfg);

/// Corollary specialization to stability: requires open-loop stable P
/// and C and returns true iff the loop is certified 0-dominant.
bool stability_check(const FeedbackLoop& loop, const SweepConfig& cfg);

}  // namespace sgdom

#endif  // SGDOM_ANALYSIS_HPP
