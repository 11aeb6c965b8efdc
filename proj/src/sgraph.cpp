#include "sgdom/sgraph.hpp"

#include "sgdom/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace sgdom {

namespace {

constexpr double kDirTol = 1e-14;
constexpr double kInvalid = -1e30;

bool matrix_is_zero(const Eigen::MatrixXcd& A) {
    return A.cwiseAbs().maxCoeff() == 0.0;
}

// Objective wrappers for the sphere search. Invalid directions (those
// that A annihilates) evaluate to kInvalid so the search rejects them.
double gain_objective(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x) {
    return (A * x).norm();
}

double cos_phase_objective(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x) {
    const Eigen::VectorXcd y = A * x;
    const double ny = y.norm();
    if (ny <= kDirTol) return kInvalid;
    return std::clamp(x.dot(y).real() / ny, -1.0, 1.0);
}

// Maximizes f over the unit sphere in C^m by central finite differences
// in the 2m real coordinates with a backtracking step search.
Eigen::VectorXcd sphere_maximize(const std::function<double(const Eigen::VectorXcd&)>& f,
                                 Eigen::VectorXcd x, int iters) {
    const int m = static_cast<int>(x.size());
    x.normalize();
    double fx = f(x);
    if (fx <= kInvalid) return x;

    constexpr double h = 1e-6;
    double step = 0.1;
    Eigen::VectorXd grad(2 * m);

    for (int it = 0; it < iters; ++it) {
        for (int k = 0; k < 2 * m; ++k) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
            e(k / 2) = (k % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
            const double fp = f((x + h * e).normalized());
            const double fm = f((x - h * e).normalized());
            grad(k) = (fp - fm) / (2.0 * h);
        }
        const double gn = grad.norm();
        if (gn < 1e-12) break;

        Eigen::VectorXcd dir(m);
        for (int c = 0; c < m; ++c) dir(c) = Complex(grad(2 * c), grad(2 * c + 1));
        dir /= gn;

        bool improved = false;
        while (step >= 1e-12) {
            const Eigen::VectorXcd cand = (x + step * dir).normalized();
            const double fc = f(cand);
            if (fc > fx) {
                x = cand;
                fx = fc;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
        step = std::min(step * 2.0, 0.5);
    }
    return x;
}

// Deterministic witness directions from the spectral structure of A:
// eigenvectors, right singular vectors, and eigenvectors of the
// Hermitian and skew-Hermitian parts.
std::vector<Eigen::VectorXcd> decomposition_seeds(const Eigen::MatrixXcd& A) {
    const int m = static_cast<int>(A.rows());
    std::vector<Eigen::VectorXcd> seeds;
    seeds.reserve(static_cast<std::size_t>(4 * m));

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, true);
    if (es.info() == Eigen::Success) {
        for (int i = 0; i < m; ++i) seeds.push_back(es.eigenvectors().col(i));
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    for (int i = 0; i < m; ++i) seeds.push_back(svd.matrixV().col(i));

    const Eigen::MatrixXcd herm = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eh(herm);
    if (eh.info() == Eigen::Success) {
        for (int i = 0; i < m; ++i) seeds.push_back(eh.eigenvectors().col(i));
    }

    const Eigen::MatrixXcd skew = Complex(0.0, -0.5) * (A - A.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ek(skew);
    if (ek.info() == Eigen::Success) {
        for (int i = 0; i < m; ++i) seeds.push_back(ek.eigenvectors().col(i));
    }
    return seeds;
}

void push_point(SGCloud& cloud, const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x) {
    if (auto p = sg_point(A, x)) cloud.points.push_back(std::move(*p));
}

double branch_min(const Complex& za, const Complex& zb) {
    return std::min(std::abs(za - zb), std::abs(za - std::conj(zb)));
}

}  // namespace

std::vector<SGPoint> dedupe_points(std::vector<SGPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const SGPoint& a, const SGPoint& b) {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.phase < b.phase;
    });
    std::vector<SGPoint> out;
    for (auto& p : pts) {
        if (!out.empty()) {
            const SGPoint& q = out.back();
            if (std::abs(p.gain - q.gain) <= 1e-12 * (1.0 + q.gain) &&
                std::abs(p.phase - q.phase) <= 1e-12 * (1.0 + q.phase)) {
                continue;
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::optional<SGPoint> sg_point(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x) {
    if (A.rows() != A.cols() || x.size() != A.rows()) {
        throw std::invalid_argument("sg_point: dimension mismatch between matrix and direction");
    }
    const double nx = x.norm();
    if (nx <= kDirTol) return std::nullopt;
    const Eigen::VectorXcd y = A * x;
    const double ny = y.norm();
    if (ny <= kDirTol * nx) return std::nullopt;

    SGPoint p;
    p.gain = ny / nx;
    // Equals acos(Re<x,y> / (|x||y|)), written in the half-angle form.
    const Eigen::VectorXcd u = x / nx;
    const Eigen::VectorXcd w = y / ny;
    p.phase = 2.0 * std::atan2((u - w).norm(), (u + w).norm());
    p.witness = u;
    return p;
}

SGCloud sg_cloud(const Eigen::MatrixXcd& A, const CloudConfig& cfg) {
    if (A.rows() != A.cols() || A.rows() < 1) {
        throw std::invalid_argument("sg_cloud: matrix must be square and nonempty");
    }
    SGCloud cloud;
    cloud.matrix = A;
    if (matrix_is_zero(A)) {
        cloud.zero_matrix = true;
        return cloud;
    }

    const int m = static_cast<int>(A.rows());
    if (m == 1) {
        Eigen::VectorXcd x(1);
        x(0) = 1.0;
        push_point(cloud, A, x);
        cloud.refined = cfg.refine_iters > 0;
        return cloud;
    }

    const CounterRng rng(cfg.seed, cfg.stream);
    for (int k = 0; k < cfg.samples; ++k) {
        push_point(cloud, A, rng.unit_direction(static_cast<std::uint64_t>(k), m));
    }

    const auto seeds = decomposition_seeds(A);
    std::vector<SGPoint> seed_points;
    for (const auto& s : seeds) {
        if (auto p = sg_point(A, s)) {
            cloud.points.push_back(*p);
            seed_points.push_back(std::move(*p));
        }
    }

    if (cfg.refine_iters > 0 && !seed_points.empty()) {
        // Extremal starts are drawn from the decomposition seeds only, so
        // the refined points do not depend on the sampling budget.
        const SGPoint* start_max_gain = &seed_points[0];
        const SGPoint* start_min_gain = &seed_points[0];
        const SGPoint* start_max_phase = &seed_points[0];
        const SGPoint* start_min_phase = &seed_points[0];
        for (const auto& p : seed_points) {
            if (p.gain > start_max_gain->gain) start_max_gain = &p;
            if (p.gain < start_min_gain->gain) start_min_gain = &p;
            if (p.phase > start_max_phase->phase) start_max_phase = &p;
            if (p.phase < start_min_phase->phase) start_min_phase = &p;
        }

        auto refine = [&](const Eigen::VectorXcd& x0,
                          const std::function<double(const Eigen::VectorXcd&)>& f) {
            push_point(cloud, A, sphere_maximize(f, x0, cfg.refine_iters));
        };
        refine(start_max_gain->witness,
               [&](const Eigen::VectorXcd& x) { return gain_objective(A, x); });
        refine(start_min_gain->witness,
               [&](const Eigen::VectorXcd& x) { return -gain_objective(A, x); });
        refine(start_max_phase->witness, [&](const Eigen::VectorXcd& x) {
            const double c = cos_phase_objective(A, x);
            return c <= kInvalid ? kInvalid : -c;
        });
        refine(start_min_phase->witness,
               [&](const Eigen::VectorXcd& x) { return cos_phase_objective(A, x); });
        cloud.refined = true;
    }
    return cloud;
}

SGCloud sg_inverse_cloud(const Eigen::MatrixXcd& A, const CloudConfig& cfg) {
    SGCloud cloud = sg_cloud(A, cfg);
    cloud.inverse = true;
    for (auto& p : cloud.points) p.gain = 1.0 / p.gain;
    return cloud;
}

SGStats sg_stats(const Eigen::MatrixXcd& A, int refine_iters) {
    if (A.rows() != A.cols() || A.rows() < 1) {
        throw std::invalid_argument("sg_stats: matrix must be square and nonempty");
    }
    SGStats st;
    if (matrix_is_zero(A)) return st;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    st.sigma_max = svd.singularValues()(0);
    st.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eh(0.5 * (A + A.adjoint()));
    st.herm_min = eh.eigenvalues().minCoeff();
    st.herm_max = eh.eigenvalues().maxCoeff();

    const int m = static_cast<int>(A.rows());
    if (m == 1) {
        st.psi_max = std::abs(std::arg(A(0, 0)));
        return st;
    }

    double best_cos = 1.0;
    Eigen::VectorXcd best_dir;
    std::vector<std::pair<double, Eigen::VectorXcd>> starts;
    for (const auto& s : decomposition_seeds(A)) {
        const double c = cos_phase_objective(A, s);
        if (c <= kInvalid) continue;
        if (best_dir.size() == 0 || c < best_cos) {
            best_cos = c;
            best_dir = s;
        }
        starts.emplace_back(c, s);
    }
    std::sort(starts.begin(), starts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t n_starts = std::min<std::size_t>(starts.size(), 3);
    for (std::size_t i = 0; i < n_starts && refine_iters > 0; ++i) {
        const Eigen::VectorXcd x = sphere_maximize(
            [&](const Eigen::VectorXcd& v) {
                const double c = cos_phase_objective(A, v);
                return c <= kInvalid ? kInvalid : -c;
            },
            starts[i].second, refine_iters);
        const double c = cos_phase_objective(A, x);
        if (c > kInvalid && c < best_cos) {
            best_cos = c;
            best_dir = x;
        }
    }
    st.psi_max = std::acos(std::clamp(best_cos, -1.0, 1.0));
    if (best_dir.size() > 0) {
        if (const auto p = sg_point(A, best_dir)) st.psi_max = p->phase;
    }
    return st;
}

DistanceResult sg_distance(const SGCloud& a, const SGCloud& b, int refine_iters) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("sg_distance: distance to an empty cloud is undefined");
    }
    const auto pa = dedupe_points(a.points);
    const auto pb = dedupe_points(b.points);

    DistanceResult best;
    best.distance = std::numeric_limits<double>::infinity();
    const SGPoint* wa = nullptr;
    const SGPoint* wb = nullptr;
    for (const auto& p : pa) {
        const Complex za = p.upper();
        for (const auto& q : pb) {
            const Complex zb = q.upper();
            const double d1 = std::abs(za - zb);
            const double d2 = std::abs(za - std::conj(zb));
            const double d = std::min(d1, d2);
            if (d < best.distance) {
                best.distance = d;
                best.z1 = za;
                best.z2 = d1 <= d2 ? zb : std::conj(zb);
                wa = &p;
                wb = &q;
            }
        }
    }

    if (refine_iters > 0 && wa && wb && (a.dimension() > 1 || b.dimension() > 1)) {
        const int ma = a.dimension();
        const int mb = b.dimension();
        auto eval_pair = [&](const Eigen::VectorXcd& xa, const Eigen::VectorXcd& xb,
                             Complex* za_out = nullptr, Complex* zb_out = nullptr) {
            auto qa = sg_point(a.matrix, xa);
            auto qb = sg_point(b.matrix, xb);
            if (!qa || !qb) return 1e30;
            const double ga = a.inverse ? 1.0 / qa->gain : qa->gain;
            const double gb = b.inverse ? 1.0 / qb->gain : qb->gain;
            const Complex za = std::polar(ga, qa->phase);
            const Complex zb = std::polar(gb, qb->phase);
            if (za_out) *za_out = za;
            if (zb_out) *zb_out = zb;
            return branch_min(za, zb);
        };

        Eigen::VectorXcd joint(ma + mb);
        joint << wa->witness, wb->witness;
        const Eigen::VectorXcd polished = sphere_maximize(
            [&](const Eigen::VectorXcd& v) {
                const Eigen::VectorXcd xa = v.head(ma);
                const Eigen::VectorXcd xb = v.tail(mb);
                if (xa.norm() <= kDirTol || xb.norm() <= kDirTol) return kInvalid;
                return -eval_pair(xa, xb);
            },
            joint, refine_iters);

        Complex za;
        Complex zb;
        const Eigen::VectorXcd xa = polished.head(ma);
        const Eigen::VectorXcd xb = polished.tail(mb);
        if (xa.norm() > kDirTol && xb.norm() > kDirTol) {
            const double d = eval_pair(xa, xb, &za, &zb);
            if (d < best.distance) {
                best.distance = d;
                best.z1 = za;
                best.z2 = std::abs(za - zb) <= std::abs(za - std::conj(zb)) ? zb : std::conj(zb);
            }
        }
    }
    return best;
}

bool eig_containment(const Eigen::MatrixXcd& A, const CloudConfig& cfg, double tol) {
    if (matrix_is_zero(A)) return true;
    const SGCloud cloud = sg_cloud(A, cfg);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eig_containment: eigensolver failed");
    }
    const double scale = 1.0 + A.norm();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex lambda = es.eigenvalues()(i);
        if (std::abs(lambda) <= 1e-12 * scale) continue;
        double mind = std::numeric_limits<double>::infinity();
        for (const auto& p : cloud.points) {
            mind = std::min(mind, branch_min(lambda, p.upper()));
            if (mind <= tol) break;
        }
        if (mind > tol) return false;
    }
    return true;
}

bool unitary_invariance_check(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& U) {
    if (U.rows() != U.cols() || U.rows() != A.rows() || A.rows() != A.cols()) {
        throw std::invalid_argument("unitary_invariance_check: dimension mismatch");
    }
    const int m = static_cast<int>(A.rows());
    const Eigen::MatrixXcd gram = U.adjoint() * U;
    if ((gram - Eigen::MatrixXcd::Identity(m, m)).norm() > 1e-10 * std::sqrt(double(m))) {
        throw std::invalid_argument("unitary_invariance_check: U is not unitary");
    }

    const Eigen::MatrixXcd B = U.adjoint() * A * U;
    if (matrix_is_zero(A)) return matrix_is_zero(B) || B.cwiseAbs().maxCoeff() <= 1e-12;

    const SGStats sa = sg_stats(A);
    const SGStats sb = sg_stats(B);
    const double stat_tol = 1e-8 * (1.0 + A.norm());
    if (std::abs(sa.sigma_max - sb.sigma_max) > stat_tol) return false;
    if (std::abs(sa.sigma_min - sb.sigma_min) > stat_tol) return false;
    if (std::abs(sa.herm_min - sb.herm_min) > stat_tol) return false;
    if (std::abs(sa.herm_max - sb.herm_max) > stat_tol) return false;
    if (std::abs(sa.psi_max - sb.psi_max) > 1e-8) return false;

    // Matched witnesses: the point of U*AU at x must equal the point of
    // A at Ux, since gains and angles are preserved by U.
    const CounterRng rng(0x5eedu, 0x7777u);
    for (int k = 0; k < 64; ++k) {
        const Eigen::VectorXcd x = rng.unit_direction(static_cast<std::uint64_t>(k), m);
        const auto qb = sg_point(B, x);
        const auto qa = sg_point(A, U * x);
        if (static_cast<bool>(qa) != static_cast<bool>(qb)) return false;
        if (!qa) continue;
        if (std::abs(qa->upper() - qb->upper()) > 1e-8 * (1.0 + qa->gain)) return false;
    }
    return true;
}

}  // namespace sgdom
