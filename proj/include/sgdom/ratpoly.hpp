#ifndef SGDOM_RATPOLY_HPP
#define SGDOM_RATPOLY_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace sgdom {

using Complex = std::complex<double>;

/// Dense univariate polynomial with real coefficients stored in ascending
/// order: coeffs[k] multiplies s^k. The zero polynomial is represented by
/// an empty coefficient vector and reports degree -1.
class Polynomial {
public:
    Polynomial() = default;

    /// Builds a polynomial from ascending coefficients. Trailing
    /// coefficients that are negligible relative to the largest one are
    /// trimmed so that the leading coefficient is meaningful.
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return Polynomial({1.0}); }

    /// Degree of the polynomial, -1 for the zero polynomial.
    [[nodiscard]] int degree() const;
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }

    [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

    /// Coefficient of s^k, zero when k exceeds the degree.
    [[nodiscard]] double coeff(std::size_t k) const;

    /// Leading coefficient; throws for the zero polynomial.
    [[nodiscard]] double leading() const;

    /// Horner evaluation at a complex point.
    [[nodiscard]] Complex eval(const Complex& s) const;

    /// Same polynomial scaled so the leading coefficient is one.
    [[nodiscard]] Polynomial monic() const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double scalar) const;
    Polynomial operator-() const { return (*this) * -1.0; }

    [[nodiscard]] std::string to_string() const;

private:
    std::vector<double> coeffs_;
};

/// One root of a real polynomial together with its multiplicity after
/// clustering of nearby numerical roots.
struct ClusteredRoot {
    Complex value;
    int multiplicity = 1;
};

/// Multiset of clustered roots, sorted by real part then imaginary part,
/// with conjugate symmetry enforced for real input polynomials.
struct RootMultiset {
    std::vector<ClusteredRoot> roots;

    /// Total root count with multiplicity.
    [[nodiscard]] int total() const;

    /// Number of roots (with multiplicity) satisfying Re > axis_tol.
    [[nodiscard]] int count_right_of(double axis_tol) const;

    /// Smallest |Re| over all roots; +inf when empty.
    [[nodiscard]] double min_abs_real() const;
};

/// Computes all roots of p as eigenvalues of the balanced companion
/// matrix, then clusters roots that lie within the clustering radius
/// max(tol, 64*sqrt(machine eps)*(1+|z|)) of each other into multiple
/// roots. Throws std::invalid_argument for the zero polynomial; a
/// degree-0 polynomial has an empty root multiset.
RootMultiset poly_roots(const Polynomial& p, double tol = 1e-8);

/// Clusters a raw list of complex values (typically eigenvalues) into a
/// multiset using the same adaptive radius as poly_roots, snapping
/// near-real values onto the axis and enforcing conjugate symmetry.
RootMultiset cluster_roots(const std::vector<Complex>& raw, double tol);

/// Proper or improper scalar rational function num/den with real
/// coefficients. Always stored with a nonzero denominator.
struct RationalFunction {
    Polynomial num;
    Polynomial den{Polynomial::one()};

    [[nodiscard]] bool is_zero() const { return num.is_zero(); }

    /// Relative degree den.degree() - num.degree(); a proper transfer
    /// function has relative degree >= 0. The zero function is proper.
    [[nodiscard]] bool proper() const;

    /// Value at s = infinity: 0 when strictly proper, the ratio of
    /// leading coefficients when biproper; throws when improper.
    [[nodiscard]] Complex eval_at_infinity() const;

    [[nodiscard]] std::string to_string() const;
};

/// Cancels common roots of num and den: any root of num lying within tol
/// of a root of den is removed from both, once per shared multiplicity,
/// by synthetic deflation (conjugate pairs are deflated as real
/// quadratics). The result is normalized to a monic denominator. Throws
/// std::invalid_argument when den is the zero polynomial.
RationalFunction rat_reduce(const Polynomial& num, const Polynomial& den,
                            double tol = 1e-8);

/// Evaluates r at a finite complex point. Throws std::domain_error when
/// the denominator vanishes at s (evaluation at a pole). Points at
/// infinity are handled by RationalFunction::eval_at_infinity.
Complex rat_eval(const RationalFunction& r, const Complex& s);

RationalFunction rat_add(const RationalFunction& a, const RationalFunction& b,
                         double tol = 1e-8);
RationalFunction rat_sub(const RationalFunction& a, const RationalFunction& b,
                         double tol = 1e-8);
RationalFunction rat_mul(const RationalFunction& a, const RationalFunction& b,
                         double tol = 1e-8);

}  // namespace sgdom

#endif  // SGDOM_RATPOLY_HPP
