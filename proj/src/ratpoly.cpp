#include "sgdom/ratpoly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sgdom {

namespace {

constexpr double kTrimRel = 1e-12;

// Clustering radius around a numerical root. Companion eigenvalues of a
// double root split by O(sqrt(machine eps)), so the radius cannot shrink
// below that scale no matter how small the user tolerance is.
double cluster_radius(const Complex& z, double tol) {
    constexpr double kSqrtEps = 1.4901161193847656e-8;
    return std::max(tol, 64.0 * kSqrtEps * (1.0 + std::abs(z)));
}

// Parlett-Reinsch diagonal balancing with radix-2 scale factors.
void balance_inplace(Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                r += std::abs(A(i, j));
                c += std::abs(A(j, i));
            }
            if (r == 0.0 || c == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (f != 1.0 && (c + r) < 0.95 * s) {
                converged = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

// Divides p by (s - r) for a real root r, discarding the remainder.
Polynomial deflate_linear(const Polynomial& p, double r) {
    const auto& c = p.coeffs();
    const int n = p.degree();
    std::vector<double> q(static_cast<std::size_t>(n), 0.0);
    double carry = c[static_cast<std::size_t>(n)];
    for (int k = n - 1; k >= 0; --k) {
        q[static_cast<std::size_t>(k)] = carry;
        carry = c[static_cast<std::size_t>(k)] + r * carry;
    }
    return Polynomial(std::move(q));
}

// Divides p by s^2 - 2*re*s + m2 (the real quadratic with conjugate
// roots re +/- j*im, m2 = re^2 + im^2), discarding the remainder.
Polynomial deflate_quadratic(const Polynomial& p, double re, double m2) {
    const int n = p.degree();
    const auto& c = p.coeffs();
    std::vector<double> q(static_cast<std::size_t>(n - 1), 0.0);
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = n - 2; k >= 0; --k) {
        const double qk = c[static_cast<std::size_t>(k + 2)] + 2.0 * re * b1 - m2 * b2;
        q[static_cast<std::size_t>(k)] = qk;
        b2 = b1;
        b1 = qk;
    }
    return Polynomial(std::move(q));
}

std::vector<Complex> raw_poly_roots(const Polynomial& p) {
    const int n = p.degree();
    const auto monic = p.monic();
    const auto& a = monic.coeffs();

    if (n == 1) {
        return {Complex(-a[0], 0.0)};
    }
    if (n == 2) {
        const double b = a[1];
        const double c0 = a[0];
        const double disc = b * b - 4.0 * c0;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
            double r1;
            double r2;
            if (qq != 0.0) {
                r1 = qq;
                r2 = c0 / qq;
            } else {
                r1 = 0.0;
                r2 = -b;
            }
            return {Complex(r1, 0.0), Complex(r2, 0.0)};
        }
        const double re = -0.5 * b;
        const double im = 0.5 * std::sqrt(-disc);
        return {Complex(re, im), Complex(re, -im)};
    }

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[static_cast<std::size_t>(i)];
    balance_inplace(comp);

    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("poly_roots: companion eigensolver failed for " + p.to_string());
    }
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    double maxabs = 0.0;
    for (double c : coeffs_) maxabs = std::max(maxabs, std::abs(c));
    if (maxabs == 0.0) {
        coeffs_.clear();
        return;
    }
    while (!coeffs_.empty() && std::abs(coeffs_.back()) <= kTrimRel * maxabs) {
        coeffs_.pop_back();
    }
}

int Polynomial::degree() const {
    return static_cast<int>(coeffs_.size()) - 1;
}

double Polynomial::coeff(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : 0.0;
}

double Polynomial::leading() const {
    if (coeffs_.empty()) {
        throw std::invalid_argument("Polynomial::leading: zero polynomial");
    }
    return coeffs_.back();
}

Complex Polynomial::eval(const Complex& s) const {
    Complex acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

Polynomial Polynomial::monic() const {
    const double lead = leading();
    std::vector<double> out(coeffs_);
    for (double& c : out) c /= lead;
    out.back() = 1.0;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = coeff(k) + other.coeff(k);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = coeff(k) - other.coeff(k);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (is_zero() || other.is_zero()) return Polynomial();
    std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double scalar) const {
    std::vector<double> out(coeffs_);
    for (double& c : out) c *= scalar;
    return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const double c = coeff(static_cast<std::size_t>(k));
        if (c == 0.0) continue;
        if (first) {
            if (c < 0.0) os << "-";
            first = false;
        } else {
            os << (c < 0.0 ? " - " : " + ");
        }
        const double mag = std::abs(c);
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", mag);
        if (k == 0) {
            os << buf;
        } else {
            if (mag != 1.0) os << buf << " ";
            os << "s";
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

int RootMultiset::total() const {
    return std::accumulate(roots.begin(), roots.end(), 0,
                           [](int acc, const ClusteredRoot& r) { return acc + r.multiplicity; });
}

int RootMultiset::count_right_of(double axis_tol) const {
    int n = 0;
    for (const auto& r : roots) {
        if (r.value.real() > axis_tol) n += r.multiplicity;
    }
    return n;
}

double RootMultiset::min_abs_real() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::min(m, std::abs(r.value.real()));
    return m;
}

RootMultiset cluster_roots(const std::vector<Complex>& raw, double tol) {
    const std::size_t n = raw.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rad = std::min(cluster_radius(raw[i], tol), cluster_radius(raw[j], tol));
            if (std::abs(raw[i] - raw[j]) <= rad) {
                parent[find(i)] = find(j);
            }
        }
    }

    std::vector<ClusteredRoot> clusters;
    for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        Complex sum(0.0, 0.0);
        int count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (find(j) == i) {
                sum += raw[j];
                ++count;
            }
        }
        clusters.push_back({sum / static_cast<double>(count), count});
    }

    for (auto& c : clusters) {
        if (std::abs(c.value.imag()) <= cluster_radius(c.value, tol)) {
            c.value = Complex(c.value.real(), 0.0);
        }
    }

    // Pair complex clusters with their conjugates and average the two
    // estimates so the multiset comes out exactly symmetric.
    std::vector<bool> used(clusters.size(), false);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (used[i] || clusters[i].value.imag() <= 0.0) continue;
        std::size_t best = clusters.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            if (j == i || used[j] || clusters[j].value.imag() >= 0.0) continue;
            const double d = std::abs(std::conj(clusters[i].value) - clusters[j].value);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best < clusters.size() &&
            best_d <= 2.0 * cluster_radius(clusters[i].value, tol) &&
            clusters[best].multiplicity == clusters[i].multiplicity) {
            const Complex z = 0.5 * (clusters[i].value + std::conj(clusters[best].value));
            clusters[i].value = z;
            clusters[best].value = std::conj(z);
            used[i] = used[best] = true;
        }
    }

    std::sort(clusters.begin(), clusters.end(), [](const ClusteredRoot& a, const ClusteredRoot& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return RootMultiset{std::move(clusters)};
}

RootMultiset poly_roots(const Polynomial& p, double tol) {
    if (p.is_zero()) {
        throw std::invalid_argument("poly_roots: roots of the zero polynomial are undefined");
    }
    if (p.degree() == 0) return RootMultiset{};
    return cluster_roots(raw_poly_roots(p), tol);
}

bool RationalFunction::proper() const {
    if (num.is_zero()) return true;
    return den.degree() >= num.degree();
}

Complex RationalFunction::eval_at_infinity() const {
    if (num.is_zero()) return Complex(0.0, 0.0);
    const int rel = den.degree() - num.degree();
    if (rel > 0) return Complex(0.0, 0.0);
    if (rel == 0) return Complex(num.leading() / den.leading(), 0.0);
    throw std::domain_error("RationalFunction: value at infinity of an improper function");
}

std::string RationalFunction::to_string() const {
    return "(" + num.to_string() + ") / (" + den.to_string() + ")";
}

RationalFunction rat_reduce(const Polynomial& num, const Polynomial& den, double tol) {
    if (den.is_zero()) {
        throw std::invalid_argument("rat_reduce: zero denominator");
    }
    if (num.is_zero()) {
        return RationalFunction{Polynomial::zero(), Polynomial::one()};
    }

    Polynomial n = num;
    Polynomial d = den;

    if (n.degree() >= 1 && d.degree() >= 1) {
        auto nr = poly_roots(n, tol).roots;
        auto dr = poly_roots(d, tol).roots;
        for (auto& rn : nr) {
            if (rn.multiplicity <= 0 || rn.value.imag() < 0.0) continue;
            for (auto& rd : dr) {
                if (rd.multiplicity <= 0 || rd.value.imag() < 0.0) continue;
                if (std::abs(rn.value - rd.value) > tol) continue;
                const int k = std::min(rn.multiplicity, rd.multiplicity);
                const bool complex_pair = rn.value.imag() > 0.0;
                for (int t = 0; t < k; ++t) {
                    if (complex_pair) {
                        n = deflate_quadratic(n, rn.value.real(), std::norm(rn.value));
                        d = deflate_quadratic(d, rd.value.real(), std::norm(rd.value));
                    } else {
                        n = deflate_linear(n, rn.value.real());
                        d = deflate_linear(d, rd.value.real());
                    }
                }
                rn.multiplicity -= k;
                rd.multiplicity -= k;
                if (complex_pair) {
                    // Consume the conjugate partners as well.
                    for (auto& rc : nr) {
                        if (rc.value.imag() < 0.0 &&
                            std::abs(rc.value - std::conj(rn.value)) <= tol) {
                            rc.multiplicity -= k;
                            break;
                        }
                    }
                    for (auto& rc : dr) {
                        if (rc.value.imag() < 0.0 &&
                            std::abs(rc.value - std::conj(rd.value)) <= tol) {
                            rc.multiplicity -= k;
                            break;
                        }
                    }
                }
                if (rn.multiplicity <= 0) break;
            }
        }
    }

    if (n.is_zero()) {
        return RationalFunction{Polynomial::zero(), Polynomial::one()};
    }
    const double lead = d.leading();
    return RationalFunction{n * (1.0 / lead), d.monic()};
}

Complex rat_eval(const RationalFunction& r, const Complex& s) {
    const double sabs = std::abs(s);
    if (sabs > 1e100) {
        // Far outside any finite pole: fall back to the leading behavior.
        if (r.num.is_zero()) return Complex(0.0, 0.0);
        const int rel = r.den.degree() - r.num.degree();
        const Complex ratio(r.num.leading() / r.den.leading(), 0.0);
        if (rel == 0) return ratio;
        if (rel > 0) return Complex(0.0, 0.0);
        return ratio * std::pow(s, -rel);
    }

    const Complex dv = r.den.eval(s);
    if (sabs <= 1e9) {
        double scale = 0.0;
        double pw = 1.0;
        for (double c : r.den.coeffs()) {
            scale += std::abs(c) * pw;
            pw *= std::max(1.0, sabs);
        }
        if (std::abs(dv) <= 1e-250 * scale) {
            std::ostringstream os;
            os << "rat_eval: denominator " << r.den.to_string() << " vanishes at s = ("
               << s.real() << ", " << s.imag() << ")";
            throw std::domain_error(os.str());
        }
    }
    return r.num.eval(s) / dv;
}

RationalFunction rat_add(const RationalFunction& a, const RationalFunction& b, double tol) {
    return rat_reduce(a.num * b.den + b.num * a.den, a.den * b.den, tol);
}

RationalFunction rat_sub(const RationalFunction& a, const RationalFunction& b, double tol) {
    return rat_reduce(a.num * b.den - b.num * a.den, a.den * b.den, tol);
}

RationalFunction rat_mul(const RationalFunction& a, const RationalFunction& b, double tol) {
    return rat_reduce(a.num * b.num, a.den * b.den, tol);
}

}  // namespace sgdom
