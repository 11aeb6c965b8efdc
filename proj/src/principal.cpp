#include "sgdom/principal.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgdom {

PrincipalData polar_decompose(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols() || A.rows() < 1) {
        throw std::invalid_argument("polar_decompose: matrix must be square and nonempty");
    }
    const Eigen::Index m = A.rows();
    if (A.cwiseAbs().maxCoeff() == 0.0) {
        PrincipalData out;
        out.U = Eigen::MatrixXcd::Identity(m, m);
        out.Q = Eigen::MatrixXcd::Zero(m, m);
        out.gains.assign(static_cast<std::size_t>(m), 0.0);
        return out;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd& V = svd.matrixU();
    const Eigen::MatrixXcd& W = svd.matrixV();

    PrincipalData out;
    out.U = V * W.adjoint();
    out.Q = W * svd.singularValues().asDiagonal() * W.adjoint();

    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        out.gains.push_back(svd.singularValues()(i));
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(out.U, false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("polar_decompose: eigensolver failed on the unitary factor");
    }
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.phases.push_back(std::arg(es.eigenvalues()(i)));
    }
    std::sort(out.phases.rbegin(), out.phases.rend());
    return out;
}

PrincipalData principal_values(const Eigen::MatrixXcd& A) {
    return polar_decompose(A);
}

PrincipalRegion principal_region(const Eigen::MatrixXcd& A) {
    const PrincipalData pd = principal_values(A);
    PrincipalRegion r;
    r.gain_min = pd.gains.back();
    r.gain_max = pd.gains.front();
    if (pd.phases.empty()) {
        r.annulus = true;
        return r;
    }
    r.phase_min = pd.phi_min();
    r.phase_max = pd.phi_max();
    if (pd.spread() >= M_PI) {
        r.annulus = true;
        r.phase_min = -M_PI;
        r.phase_max = M_PI;
    }
    return r;
}

bool region_contains(const PrincipalRegion& region, const Complex& z, double tol) {
    const double g = std::abs(z);
    if (g < region.gain_min - tol || g > region.gain_max + tol) return false;
    if (region.annulus) return true;
    const double a = std::arg(z);
    return a >= region.phase_min - tol && a <= region.phase_max + tol;
}

}  // namespace sgdom
