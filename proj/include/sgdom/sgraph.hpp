#ifndef SGDOM_SGRAPH_HPP
#define SGDOM_SGRAPH_HPP

#include "sgdom/ratpoly.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace sgdom {

/// One scaled-graph sample. A point represents the conjugate pair
/// gain * exp(+j phase) and gain * exp(-j phase); phase is kept in
/// [0, pi] and the witness is the unit input direction that produced
/// the point.
struct SGPoint {
    double gain = 0.0;
    double phase = 0.0;
    Eigen::VectorXcd witness;

    [[nodiscard]] Complex upper() const { return std::polar(gain, phase); }
    [[nodiscard]] Complex lower() const { return std::polar(gain, -phase); }
};

/// Sampling and refinement budget for cloud construction.
struct CloudConfig {
    int samples = 2000;
    std::uint64_t seed = 0;
    /// Iteration cap for the finite-difference boundary refinement;
    /// zero disables refinement.
    int refine_iters = 200;
    /// Substream index, used to decorrelate clouds drawn at different
    /// frequencies or for different operators under one seed.
    std::uint64_t stream = 0;
};

/// Point-cloud approximation of a scaled graph or inverse scaled graph.
struct SGCloud {
    std::vector<SGPoint> points;
    Eigen::MatrixXcd matrix;
    bool inverse = false;
    bool refined = false;
    /// Set when the underlying matrix is identically zero, which makes
    /// the (inverse) scaled graph empty.
    bool zero_matrix = false;

    [[nodiscard]] bool empty() const { return points.empty(); }
    [[nodiscard]] int dimension() const { return static_cast<int>(matrix.rows()); }
};

/// Closed-form companions of the sampled cloud: singular value range,
/// the maximal operator phase found by local search, and the extreme
/// eigenvalues of the Hermitian part.
struct SGStats {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double psi_max = 0.0;
    double herm_min = 0.0;
    double herm_max = 0.0;
};

/// Minimum distance between two clouds together with the achieving
/// points (upper-branch representatives).
struct DistanceResult {
    double distance = 0.0;
    Complex z1;
    Complex z2;
};

/// Scaled-graph point of A at direction x, or nothing when x (or Ax)
/// has no direction to measure: gain ||Ax||/||x||, phase equal to the
/// angle between x and Ax.
std::optional<SGPoint> sg_point(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x);

/// Collapses points that coincide to one part in 1e12 in gain and
/// phase. Distance scans over a cloud are insensitive to the collapse
/// but can be much cheaper on highly degenerate clouds.
std::vector<SGPoint> dedupe_points(std::vector<SGPoint> pts);

/// Samples the scaled graph of A: cfg.samples unit Gaussian directions,
/// plus deterministic witnesses from the eigenvectors, singular vectors
/// and Hermitian/skew part eigenvectors of A, plus (when enabled) four
/// extremal points located by projected finite-difference search for
/// max/min gain and max/min phase. For 1x1 matrices the cloud is the
/// single exact point. A zero matrix yields an empty cloud with the
/// zero_matrix flag set.
SGCloud sg_cloud(const Eigen::MatrixXcd& A, const CloudConfig& cfg);

/// Same sampling for the inverse scaled graph, whose points have gain
/// ||x||/||Ax|| at unchanged phase.
SGCloud sg_inverse_cloud(const Eigen::MatrixXcd& A, const CloudConfig& cfg);

/// Exact singular-value and Hermitian-part statistics plus the locally
/// optimized maximal phase.
SGStats sg_stats(const Eigen::MatrixXcd& A, int refine_iters = 300);

/// Minimum distance between two clouds over both conjugate branches.
/// With refine_iters > 0 the best witness pair is polished by joint
/// finite-difference descent. Throws std::invalid_argument when either
/// cloud is empty.
DistanceResult sg_distance(const SGCloud& a, const SGCloud& b, int refine_iters = 0);

/// Verifies that every nonzero eigenvalue of A lies within tol of the
/// sampled cloud (eigenvector witnesses make this exact up to roundoff).
bool eig_containment(const Eigen::MatrixXcd& A, const CloudConfig& cfg, double tol = 1e-8);

/// Checks invariance of the scaled graph under a unitary similarity:
/// the stats of A and U*AU must agree within 1e-8 and matched witnesses
/// (x for U*AU against Ux for A) must produce identical points. Throws
/// std::invalid_argument when U is not unitary.
bool unitary_invariance_check(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& U);

}  // namespace sgdom

#endif  // SGDOM_SGRAPH_HPP
