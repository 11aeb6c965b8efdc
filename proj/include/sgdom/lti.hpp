#ifndef SGDOM_LTI_HPP
#define SGDOM_LTI_HPP

#include "sgdom/ratpoly.hpp"

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <vector>

namespace sgdom {

/// Poles with |Re| at or below this band are treated as imaginary-axis
/// poles, which the analysis rejects.
inline constexpr double kAxisTol = 1e-9;

/// Sentinel frequency for the point at infinity on the extended axis.
inline constexpr double kOmegaInf = std::numeric_limits<double>::infinity();

struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;

    [[nodiscard]] int order() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int outputs() const { return static_cast<int>(C.rows()); }
    [[nodiscard]] int inputs() const { return static_cast<int>(B.cols()); }
};

/// Pole multiset of a transfer matrix. rank_warning is set when a rank
/// decision during state reduction was ambiguous (a singular value fell
/// within a factor of 10 of the threshold), meaning the pole count
/// should be treated with suspicion.
struct PoleSet {
    RootMultiset poles;
    bool rank_warning = false;

    [[nodiscard]] int n_orhp() const { return poles.count_right_of(kAxisTol); }
    [[nodiscard]] int total() const { return poles.total(); }
};

/// Square matrix of proper real-rational transfer functions, the plant
/// and controller representation used throughout. Construction rejects
/// improper entries and entries with poles on (or within 1e-9 of) the
/// imaginary axis.
class TransferMatrix {
public:
    /// Entries in row-major order, size m*m.
    TransferMatrix(int m, std::vector<RationalFunction> entries);

    /// Realizes the rational form of C(sI-A)^{-1}B + D by the
    /// Faddeev-LeVerrier recursion and attaches the realization. The
    /// rational form is cross-checked against the state-space form at
    /// random sample points; disagreement beyond 1e-6 relative error is
    /// a logic error.
    static TransferMatrix from_state_space(const StateSpace& ss, double tol = 1e-8);

    static TransferMatrix siso(RationalFunction r);
    static TransferMatrix constant(const Eigen::MatrixXd& gain);

    [[nodiscard]] int size() const { return m_; }
    [[nodiscard]] const RationalFunction& entry(int i, int j) const;
    [[nodiscard]] const std::optional<StateSpace>& realization() const { return realization_; }

    /// Frequency response at s = j*omega; omega may be the kOmegaInf
    /// sentinel, in which case the feedthrough value is returned.
    [[nodiscard]] Eigen::MatrixXcd eval(double omega) const;

    /// Value at an arbitrary finite complex point off the poles.
    [[nodiscard]] Eigen::MatrixXcd eval_at(const Complex& s) const;

    [[nodiscard]] TransferMatrix operator*(const TransferMatrix& other) const;
    [[nodiscard]] TransferMatrix negated() const;
    [[nodiscard]] TransferMatrix scaled(double gain) const;

private:
    TransferMatrix() = default;

    int m_ = 0;
    std::vector<RationalFunction> entries_;
    std::optional<StateSpace> realization_;
};

/// Closed loop under positive feedback: u = C y + d, y = P u + n,
/// so the loop map involves (I - PC)^{-1}.
struct FeedbackLoop {
    TransferMatrix P;
    TransferMatrix C;
};

/// Pole multiset of G. When G carries a minimal realization the poles
/// are the eigenvalues of A; otherwise a block companion realization of
/// the entries is reduced to its reachable and observable part first.
/// Throws when a pole lies within kAxisTol of the imaginary axis.
PoleSet tm_poles(const TransferMatrix& g, double tol = 1e-8);

/// Number of open right half-plane poles of G, counted with
/// multiplicity. This is the dominance degree of the system.
int dominance_index(const TransferMatrix& g, double tol = 1e-8);

/// True when det(I - P(inf) C(inf)) is bounded away from zero.
bool well_posed(const FeedbackLoop& loop);

/// True when the ORHP poles of the product PC equal the sum of the ORHP
/// pole counts of P and C, i.e. no unstable cancellation occurred.
bool cancellation_check(const FeedbackLoop& loop, double tol = 1e-8);

/// The rational function det(I - P(s)C(s)), reduced and normalized.
/// Only sized for desk-scale loops; throws for m > 6.
RationalFunction det_char(const FeedbackLoop& loop, double tol = 1e-8);

/// Exact closed-loop dominance count: the ORHP root count of the
/// closed-loop pole polynomial, assembled from the reduced determinant
/// det(I - PC) and the open-loop pole counts. Requires well-posedness
/// and no unstable cancellation and throws naming the violated
/// assumption otherwise.
int closed_loop_dominance_oracle(const FeedbackLoop& loop, double tol = 1e-8);

/// PBH rank test at every eigenvalue of A: the realization is minimal
/// iff [lambda I - A, B] and [lambda I - A^T, C^T] have full row rank
/// for all eigenvalues lambda.
bool ss_minimality(const StateSpace& ss, double tol = 1e-8);

}  // namespace sgdom

#endif  // SGDOM_LTI_HPP
