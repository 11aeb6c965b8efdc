#ifndef SGDOM_PRINCIPAL_HPP
#define SGDOM_PRINCIPAL_HPP

#include "sgdom/ratpoly.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sgdom {

/// Polar decomposition A = U Q with U unitary and Q Hermitian positive
/// semidefinite, plus the principal gains (singular values, descending)
/// and principal phases (arguments of the eigenvalues of U, descending,
/// on the branch (-pi, pi]). The zero matrix has no phases.
struct PrincipalData {
    Eigen::MatrixXcd U;
    Eigen::MatrixXcd Q;
    std::vector<double> gains;
    std::vector<double> phases;

    [[nodiscard]] double phi_max() const { return phases.empty() ? 0.0 : phases.front(); }
    [[nodiscard]] double phi_min() const { return phases.empty() ? 0.0 : phases.back(); }
    [[nodiscard]] double spread() const { return phi_max() - phi_min(); }
};

/// Gain/phase box spanned by the principal values: an annulus when the
/// phase spread reaches pi (the angular part wraps), otherwise a sector
/// of the annulus between the extreme principal phases.
struct PrincipalRegion {
    bool annulus = false;
    double gain_min = 0.0;
    double gain_max = 0.0;
    double phase_min = 0.0;
    double phase_max = 0.0;
};

/// Computes the polar factors via the SVD, U = V W* and Q = W S W*.
PrincipalData polar_decompose(const Eigen::MatrixXcd& A);

/// Principal gains and phases of A (the data of polar_decompose without
/// the factors).
PrincipalData principal_values(const Eigen::MatrixXcd& A);

/// Region spanned by the principal values of A.
PrincipalRegion principal_region(const Eigen::MatrixXcd& A);

/// Membership test with an absolute slack on both gain and phase.
bool region_contains(const PrincipalRegion& region, const Complex& z, double tol = 1e-12);

}  // namespace sgdom

#endif  // SGDOM_PRINCIPAL_HPP
