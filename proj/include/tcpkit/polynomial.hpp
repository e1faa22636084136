#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace tcpkit {

/// Dense univariate polynomial with coefficients in ascending degree order.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> ascending) : c_(ascending) {}
    explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {}

    static Polynomial constant(double v) { return Polynomial({v}); }
    static Polynomial variable() { return Polynomial({0.0, 1.0}); }

    /// Degree after trimming numerically-zero leading coefficients;
    /// -1 for the zero polynomial.
    int degree(double rel_tol = 0.0) const;
    bool is_zero(double abs_tol) const;

    double operator()(double s) const;
    Polynomial derivative() const;
    double max_abs_coeff() const;

    std::span<const double> coeffs() const { return c_; }
    double coeff(int k) const {
        return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
    }

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double s) const;
    Polynomial operator-() const;

private:
    std::vector<double> c_;
};

/// All real roots of p in [lo, hi], ascending and deduplicated. Roots are
/// located from the companion-matrix spectrum and polished by safeguarded
/// Newton, so even-multiplicity roots are reported (to about sqrt(eps)).
std::vector<double> real_roots(const Polynomial& p, double lo, double hi);

/// Bivariate polynomial represented by its coefficients in the second
/// variable: f(x, y) = sum_j by_y_power[j](x) * y^j.
using BiPoly = std::vector<Polynomial>;

double bipoly_eval(const BiPoly& f, double x, double y);

/// Sylvester resultant of f and g with respect to the second variable;
/// its roots contain the x-coordinates of all common zeros.
Polynomial sylvester_resultant(const BiPoly& f, const BiPoly& g);

}  // namespace tcpkit
