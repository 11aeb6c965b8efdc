#include "sgdom/lti.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sgdom {

namespace {

void check_entry_admissible(const RationalFunction& r, int i, int j) {
    if (!r.proper()) {
        std::ostringstream os;
        os << "TransferMatrix: entry (" << i << "," << j << ") is improper: " << r.to_string();
        throw std::invalid_argument(os.str());
    }
    if (r.den.degree() < 1) return;
    const auto roots = poly_roots(r.den, 1e-8);
    for (const auto& root : roots.roots) {
        if (std::abs(root.value.real()) <= kAxisTol) {
            std::ostringstream os;
            os << "TransferMatrix: entry (" << i << "," << j << ") has a boundary pole at ("
               << root.value.real() << ", " << root.value.imag()
               << "), within 1e-9 of the imaginary axis";
            throw std::domain_error(os.str());
        }
    }
}

// Controllable canonical realization of a single strictly-proper entry
// rem(s)/den(s) with monic den of degree d: A is the bottom-row
// companion of den, B = e_d, C holds the coefficients of rem.
struct EntryRealization {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
};

EntryRealization entry_realization(const RationalFunction& r) {
    const Polynomial den = r.den.monic();
    const int d = den.degree();

    double feedthrough = 0.0;
    Polynomial rem = r.num * (1.0 / r.den.leading());
    if (!rem.is_zero() && rem.degree() == d) {
        feedthrough = rem.leading();
        rem = rem - den * feedthrough;
    }

    EntryRealization out;
    out.A = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) out.A(i, i + 1) = 1.0;
    for (int j = 0; j < d; ++j) out.A(d - 1, j) = -den.coeff(static_cast<std::size_t>(j));
    out.B = Eigen::VectorXd::Zero(d);
    out.B(d - 1) = 1.0;
    out.C = Eigen::RowVectorXd::Zero(d);
    for (int j = 0; j < d; ++j) out.C(j) = rem.coeff(static_cast<std::size_t>(j));
    return out;
}

// Orthonormal basis of the smallest A-invariant subspace containing the
// columns of B, built by subspace iteration with SVD rank decisions.
// The second return is true when any singular value fell within a
// factor of 10 of the rank threshold.
std::pair<Eigen::MatrixXd, bool> reachable_basis(const Eigen::MatrixXd& A,
                                                 const Eigen::MatrixXd& B, double tol) {
    const Eigen::Index n = A.rows();
    const double scale = std::max({1.0, A.norm(), B.norm()});
    const double thresh = tol * scale;

    Eigen::MatrixXd V(n, 0);
    Eigen::MatrixXd W = B;
    bool ambiguous = false;

    for (Eigen::Index iter = 0; iter <= n && V.cols() < n; ++iter) {
        if (V.cols() > 0) {
            W -= V * (V.transpose() * W);
            W -= V * (V.transpose() * W);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeThinU);
        const auto& sig = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sig.size(); ++i) {
            if (sig(i) > thresh) ++rank;
            if (sig(i) >= thresh / 10.0 && sig(i) <= thresh * 10.0) ambiguous = true;
        }
        if (rank == 0) break;
        const Eigen::MatrixXd fresh = svd.matrixU().leftCols(rank);
        Eigen::MatrixXd grown(n, V.cols() + rank);
        grown << V, fresh;
        V = std::move(grown);
        W = A * fresh;
    }
    return {V, ambiguous};
}

std::pair<Eigen::MatrixXd, bool> kalman_reduce(const Eigen::MatrixXd& A,
                                               const Eigen::MatrixXd& B,
                                               const Eigen::MatrixXd& C, double tol) {
    auto [Vr, amb_r] = reachable_basis(A, B, tol);
    if (Vr.cols() == 0) return {Eigen::MatrixXd(0, 0), amb_r};
    const Eigen::MatrixXd A1 = Vr.transpose() * A * Vr;
    const Eigen::MatrixXd C1 = C * Vr;

    auto [Vo, amb_o] = reachable_basis(A1.transpose(), C1.transpose(), tol);
    if (Vo.cols() == 0) return {Eigen::MatrixXd(0, 0), amb_r || amb_o};
    return {Vo.transpose() * A1 * Vo, amb_r || amb_o};
}

PoleSet poles_from_eigenvalues(const std::vector<Complex>& eigs, bool warning, double tol) {
    PoleSet ps;
    ps.poles = cluster_roots(eigs, tol);
    ps.rank_warning = warning;
    for (const auto& root : ps.poles.roots) {
        if (std::abs(root.value.real()) <= kAxisTol) {
            std::ostringstream os;
            os << "tm_poles: pole at (" << root.value.real() << ", " << root.value.imag()
               << ") lies within 1e-9 of the imaginary axis";
            throw std::domain_error(os.str());
        }
    }
    return ps;
}

std::vector<Complex> matrix_eigenvalues(const Eigen::MatrixXd& A) {
    if (A.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("tm_poles: eigensolver failed on the reduced state matrix");
    }
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(A.rows()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

RationalFunction rat_det(std::vector<std::vector<RationalFunction>> M, double tol) {
    const std::size_t m = M.size();
    if (m == 1) return M[0][0];
    RationalFunction acc{Polynomial::zero(), Polynomial::one()};
    for (std::size_t j = 0; j < m; ++j) {
        if (M[0][j].is_zero()) continue;
        std::vector<std::vector<RationalFunction>> minor;
        minor.reserve(m - 1);
        for (std::size_t i = 1; i < m; ++i) {
            std::vector<RationalFunction> row;
            row.reserve(m - 1);
            for (std::size_t k = 0; k < m; ++k) {
                if (k != j) row.push_back(M[i][k]);
            }
            minor.push_back(std::move(row));
        }
        RationalFunction term = rat_mul(M[0][j], rat_det(std::move(minor), tol), tol);
        if (j % 2 == 1) term.num = -term.num;
        acc = rat_add(acc, term, tol);
    }
    return acc;
}

}  // namespace

TransferMatrix::TransferMatrix(int m, std::vector<RationalFunction> entries) {
    if (m < 1) throw std::invalid_argument("TransferMatrix: size must be at least 1");
    if (entries.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
        throw std::invalid_argument("TransferMatrix: entry count does not match size");
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            check_entry_admissible(entries[static_cast<std::size_t>(i * m + j)], i, j);
        }
    }
    m_ = m;
    entries_ = std::move(entries);
}

TransferMatrix TransferMatrix::siso(RationalFunction r) {
    return TransferMatrix(1, {std::move(r)});
}

TransferMatrix TransferMatrix::constant(const Eigen::MatrixXd& gain) {
    if (gain.rows() != gain.cols() || gain.rows() < 1) {
        throw std::invalid_argument("TransferMatrix: constant gain must be square");
    }
    const int m = static_cast<int>(gain.rows());
    std::vector<RationalFunction> entries;
    entries.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            entries.push_back(RationalFunction{Polynomial({gain(i, j)}), Polynomial::one()});
        }
    }
    return TransferMatrix(m, std::move(entries));
}

TransferMatrix TransferMatrix::from_state_space(const StateSpace& ss, double tol) {
    const Eigen::Index n = ss.A.rows();
    if (ss.A.cols() != n || ss.B.rows() != n || ss.C.cols() != n) {
        throw std::invalid_argument("from_state_space: inconsistent state dimensions");
    }
    const Eigen::Index m = ss.D.rows();
    if (ss.D.cols() != m || ss.B.cols() != m || ss.C.rows() != m) {
        throw std::invalid_argument("from_state_space: transfer matrix must be square");
    }

    // Faddeev-LeVerrier: p(s) = s^n + c1 s^{n-1} + ... + cn and
    // (sI - A)^{-1} = sum_k M_k s^{n-k} / p(s).
    std::vector<double> den_asc(static_cast<std::size_t>(n) + 1, 0.0);
    den_asc[static_cast<std::size_t>(n)] = 1.0;
    std::vector<Eigen::MatrixXd> cmb;
    cmb.reserve(static_cast<std::size_t>(n));
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    double ck = 0.0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        if (k > 1) M = ss.A * M + ck * Eigen::MatrixXd::Identity(n, n);
        ck = -(ss.A * M).trace() / static_cast<double>(k);
        den_asc[static_cast<std::size_t>(n - k)] = ck;
        cmb.push_back(ss.C * M * ss.B);
    }
    const Polynomial den(den_asc);

    std::vector<RationalFunction> entries;
    entries.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            std::vector<double> num_asc(static_cast<std::size_t>(n) + 1, 0.0);
            for (Eigen::Index k = 1; k <= n; ++k) {
                num_asc[static_cast<std::size_t>(n - k)] = cmb[static_cast<std::size_t>(k - 1)](i, j);
            }
            Polynomial num(num_asc);
            num = num + den * ss.D(i, j);
            entries.push_back(rat_reduce(num, den, tol));
        }
    }

    TransferMatrix out(static_cast<int>(m), std::move(entries));
    out.realization_ = ss;

    // Cross-check the rational form against the realization.
    Complex s(0.7071, 0.3901);
    int checked = 0;
    for (int attempt = 0; attempt < 25 && checked < 5; ++attempt) {
        Eigen::MatrixXcd direct;
        Eigen::MatrixXcd viaRat;
        try {
            const Eigen::MatrixXcd sIA =
                s * Eigen::MatrixXcd::Identity(n, n) - ss.A.cast<Complex>();
            direct = ss.C.cast<Complex>() * sIA.lu().solve(ss.B.cast<Complex>()) +
                     ss.D.cast<Complex>();
            viaRat = out.eval_at(s);
        } catch (const std::domain_error&) {
            s += Complex(0.137, 0.231);
            continue;
        }
        const double ref = std::max(1.0, direct.norm());
        if ((direct - viaRat).norm() > 1e-6 * ref) {
            throw std::runtime_error(
                "from_state_space: rational form disagrees with the realization at a sample "
                "point; the recursion lost too much precision for this system");
        }
        s += Complex(1.1, 0.77);
        ++checked;
    }
    return out;
}

const RationalFunction& TransferMatrix::entry(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * m_ + j)];
}

Eigen::MatrixXcd TransferMatrix::eval(double omega) const {
    if (std::isinf(omega)) {
        Eigen::MatrixXcd out(m_, m_);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < m_; ++j) out(i, j) = entry(i, j).eval_at_infinity();
        }
        return out;
    }
    return eval_at(Complex(0.0, omega));
}

Eigen::MatrixXcd TransferMatrix::eval_at(const Complex& s) const {
    Eigen::MatrixXcd out(m_, m_);
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) out(i, j) = rat_eval(entry(i, j), s);
    }
    return out;
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& other) const {
    if (m_ != other.m_) {
        throw std::invalid_argument("TransferMatrix: size mismatch in product");
    }
    std::vector<RationalFunction> entries;
    entries.reserve(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            RationalFunction acc{Polynomial::zero(), Polynomial::one()};
            for (int k = 0; k < m_; ++k) {
                acc = rat_add(acc, rat_mul(entry(i, k), other.entry(k, j)));
            }
            entries.push_back(std::move(acc));
        }
    }
    return TransferMatrix(m_, std::move(entries));
}

TransferMatrix TransferMatrix::negated() const {
    return scaled(-1.0);
}

TransferMatrix TransferMatrix::scaled(double gain) const {
    std::vector<RationalFunction> entries;
    entries.reserve(entries_.size());
    for (const auto& e : entries_) {
        entries.push_back(RationalFunction{e.num * gain, e.den});
    }
    return TransferMatrix(m_, std::move(entries));
}

PoleSet tm_poles(const TransferMatrix& g, double tol) {
    if (g.realization() && ss_minimality(*g.realization(), tol)) {
        return poles_from_eigenvalues(matrix_eigenvalues(g.realization()->A), false, tol);
    }

    const int m = g.size();
    int order = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            order += std::max(0, g.entry(i, j).den.degree());
        }
    }
    if (order == 0) return PoleSet{};

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(order, order);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(order, m);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, order);
    int at = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const auto& e = g.entry(i, j);
            const int d = e.den.degree();
            if (d < 1) continue;
            const EntryRealization er = entry_realization(e);
            A.block(at, at, d, d) = er.A;
            B.block(at, j, d, 1) = er.B;
            C.block(i, at, 1, d) = er.C;
            at += d;
        }
    }

    auto [Ared, ambiguous] = kalman_reduce(A, B, C, tol);
    return poles_from_eigenvalues(matrix_eigenvalues(Ared), ambiguous, tol);
}

int dominance_index(const TransferMatrix& g, double tol) {
    return tm_poles(g, tol).n_orhp();
}

bool well_posed(const FeedbackLoop& loop) {
    const Eigen::MatrixXcd pinf = loop.P.eval(kOmegaInf);
    const Eigen::MatrixXcd cinf = loop.C.eval(kOmegaInf);
    const Eigen::MatrixXcd gap =
        Eigen::MatrixXcd::Identity(pinf.rows(), pinf.cols()) - pinf * cinf;
    return std::abs(gap.determinant()) > 1e-12;
}

bool cancellation_check(const FeedbackLoop& loop, double tol) {
    const int p1 = dominance_index(loop.P, tol);
    const int p2 = dominance_index(loop.C, tol);
    const int prod = tm_poles(loop.P * loop.C, tol).n_orhp();
    return prod == p1 + p2;
}

RationalFunction det_char(const FeedbackLoop& loop, double tol) {
    const int m = loop.P.size();
    if (m > 6) {
        throw std::runtime_error(
            "det_char: symbolic determinant is only sized for m <= 6; use the sampled "
            "determinant instead");
    }
    if (loop.C.size() != m) {
        throw std::invalid_argument("det_char: plant and controller sizes differ");
    }
    const TransferMatrix pc = loop.P * loop.C;
    std::vector<std::vector<RationalFunction>> M(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        M[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            const RationalFunction eye{i == j ? Polynomial::one() : Polynomial::zero(),
                                       Polynomial::one()};
            M[static_cast<std::size_t>(i)].push_back(rat_sub(eye, pc.entry(i, j), tol));
        }
    }
    return rat_det(std::move(M), tol);
}

int closed_loop_dominance_oracle(const FeedbackLoop& loop, double tol) {
    if (!well_posed(loop)) {
        throw std::runtime_error(
            "closed_loop_dominance_oracle: assumption failed: well-posedness "
            "(det(I - P(inf)C(inf)) = 0)");
    }
    if (!cancellation_check(loop, tol)) {
        throw std::runtime_error(
            "closed_loop_dominance_oracle: assumption failed: unstable pole-zero "
            "cancellation between P and C");
    }
    const RationalFunction phi = det_char(loop, tol);
    if (phi.num.is_zero()) {
        throw std::runtime_error("closed_loop_dominance_oracle: det(I - PC) is identically zero");
    }
    int num_orhp = 0;
    if (phi.num.degree() >= 1) {
        const RootMultiset zeros = poly_roots(phi.num, tol);
        for (const auto& z : zeros.roots) {
            if (std::abs(z.value.real()) <= kAxisTol) {
                std::ostringstream os;
                os << "closed_loop_dominance_oracle: closed-loop pole at (" << z.value.real()
                   << ", " << z.value.imag() << ") lies within 1e-9 of the imaginary axis";
                throw std::domain_error(os.str());
            }
        }
        num_orhp = zeros.count_right_of(kAxisTol);
    }

    // The closed-loop pole polynomial is chi_P * chi_C * num(phi) / den(phi),
    // so unstable open-loop poles that cancel out of the determinant, or
    // never reach it, still count toward the closed-loop total.
    int den_orhp = 0;
    if (phi.den.degree() >= 1) {
        den_orhp = poly_roots(phi.den, tol).count_right_of(kAxisTol);
    }
    const int p1 = dominance_index(loop.P, tol);
    const int p2 = dominance_index(loop.C, tol);
    return num_orhp + (p1 + p2 - den_orhp);
}

bool ss_minimality(const StateSpace& ss, double tol) {
    const Eigen::Index n = ss.A.rows();
    if (n == 0) return true;

    Eigen::EigenSolver<Eigen::MatrixXd> es(ss.A, false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("ss_minimality: eigensolver failed");
    }

    auto full_row_rank = [&](const Eigen::MatrixXcd& M) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        const auto& sig = svd.singularValues();
        if (sig.size() < n) return false;
        return sig(n - 1) > tol * std::max(sig(0), 1.0);
    };

    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex lambda = es.eigenvalues()(k);
        const Eigen::MatrixXcd lIA =
            lambda * Eigen::MatrixXcd::Identity(n, n) - ss.A.cast<Complex>();

        Eigen::MatrixXcd ctrl(n, n + ss.B.cols());
        ctrl << lIA, ss.B.cast<Complex>();
        if (!full_row_rank(ctrl)) return false;

        Eigen::MatrixXcd obsv(n, n + ss.C.rows());
        obsv << lIA.transpose(), ss.C.transpose().cast<Complex>();
        if (!full_row_rank(obsv)) return false;
    }
    return true;
}

}  // namespace sgdom
