#include "tcpkit/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace tcpkit {

int Polynomial::degree(double rel_tol) const {
    const double cut = rel_tol * max_abs_coeff();
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
        if (std::abs(c_[static_cast<std::size_t>(k)]) > cut) return k;
    return -1;
}

bool Polynomial::is_zero(double abs_tol) const {
    return max_abs_coeff() <= abs_tol;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
        acc = acc * s + c_[static_cast<std::size_t>(k)];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    r += o;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    r -= o;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial();
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0.0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<double> r(c_);
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

namespace {

double bisect_sign_change(const Polynomial& p, double lo, double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * (1.0 + std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

// One or two Newton touch-ups; bisection already nails simple roots, and
// multiple roots sit on critical points located to full precision by the
// derivative recursion.
double polish_root(const Polynomial& p, const Polynomial& dp, double r) {
    for (int it = 0; it < 3; ++it) {
        const double f = p(r);
        const double d = dp(r);
        if (f == 0.0 || std::abs(d) < 1e-300) return r;
        const double step = -f / d;
        if (!std::isfinite(step) || std::abs(step) > 1.0 + std::abs(r)) return r;
        const double nr = r + step;
        if (std::abs(p(nr)) >= std::abs(f)) return r;
        r = nr;
    }
    return r;
}

}  // namespace

// Derivative-chain isolation: the real roots of p' split [lo, hi] into
// intervals where p is strictly monotone, so every sign change brackets
// exactly one root and every even-multiplicity root is a critical point
// with p equal to zero there.
std::vector<double> real_roots(const Polynomial& p, double lo, double hi) {
    std::vector<double> roots;
    const double scale = p.max_abs_coeff();
    if (scale == 0.0 || !(lo < hi)) return roots;  // zero polynomial: caller decides
    const int deg = p.degree(1e-13);
    if (deg <= 0) return roots;

    auto keep = [&](double r) {
        if (!std::isfinite(r)) return;
        const double pad = 1e-9 * (1.0 + std::abs(r));
        if (r < lo - pad || r > hi + pad) return;
        roots.push_back(std::clamp(r, lo, hi));
    };

    if (deg == 1) {
        keep(-p.coeff(0) / p.coeff(1));
    } else if (deg == 2) {
        const double a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
        const double disc = b * b - 4.0 * a * c;
        if (disc >= -1e-14 * (b * b + std::abs(4.0 * a * c))) {
            const double sd = std::sqrt(std::max(0.0, disc));
            // numerically stable split
            const double q = -0.5 * (b + (b >= 0 ? sd : -sd));
            if (q != 0.0) {
                keep(q / a);
                keep(c / q);
            } else {  // b = -(+-sd) forces c ~ 0: roots are 0 and -b/a
                keep(0.0);
                keep(-b / a);
            }
        }
    } else {
        const Polynomial dp = p.derivative();
        std::vector<double> breaks = real_roots(dp, lo, hi);
        breaks.insert(breaks.begin(), lo);
        breaks.push_back(hi);

        // candidate magnitude bound for the residual gate at touch points
        auto residual_ok = [&](double r) {
            const double mag = std::max(1.0, std::pow(std::abs(r), deg));
            return std::abs(p(r)) <= 1e-7 * scale * mag;
        };

        for (std::size_t k = 0; k < breaks.size(); ++k) {
            const double b = breaks[k];
            if (residual_ok(b)) keep(polish_root(p, dp, b));
            if (k + 1 == breaks.size()) continue;
            const double next = breaks[k + 1];
            const double fb = p(b), fn = p(next);
            if (fb == 0.0 || fn == 0.0) continue;  // endpoint roots kept above
            if ((fb < 0.0) != (fn < 0.0))
                keep(polish_root(p, dp, bisect_sign_change(p, b, next, fb)));
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> dedup;
    for (double r : roots) {
        if (dedup.empty() || r - dedup.back() > 1e-9 * (1.0 + std::abs(r)))
            dedup.push_back(r);
    }
    return dedup;
}

double bipoly_eval(const BiPoly& f, double x, double y) {
    double acc = 0.0;
    for (int j = static_cast<int>(f.size()) - 1; j >= 0; --j)
        acc = acc * y + f[static_cast<std::size_t>(j)](x);
    return acc;
}

namespace {

int bipoly_degree(const BiPoly& f, double tol) {
    for (int j = static_cast<int>(f.size()) - 1; j >= 0; --j)
        if (!f[static_cast<std::size_t>(j)].is_zero(tol)) return j;
    return -1;
}

// Determinant of a small matrix of polynomials by Laplace expansion with
// memoization over column masks.
class PolyDet {
public:
    explicit PolyDet(std::vector<std::vector<Polynomial>> m)
        : m_(std::move(m)), n_(static_cast<int>(m_.size())),
          memo_(std::size_t(1) << n_), have_(std::size_t(1) << n_, false) {}

    Polynomial run() { return det(0, (1u << n_) - 1u); }

private:
    Polynomial det(int row, unsigned cols) {
        if (row == n_) return Polynomial::constant(1.0);
        if (have_[cols]) return memo_[cols];
        Polynomial acc;
        int sign = 1;
        for (int c = 0; c < n_; ++c) {
            if (!(cols & (1u << c))) continue;
            const Polynomial& entry = m_[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
            if (entry.max_abs_coeff() != 0.0) {
                Polynomial sub = det(row + 1, cols & ~(1u << c));
                Polynomial term = entry * sub;
                if (sign < 0) term = -term;
                acc += term;
            }
            sign = -sign;
        }
        have_[cols] = true;
        memo_[cols] = acc;
        return acc;
    }

    std::vector<std::vector<Polynomial>> m_;
    int n_;
    std::vector<Polynomial> memo_;
    std::vector<bool> have_;
};

}  // namespace

Polynomial sylvester_resultant(const BiPoly& f, const BiPoly& g) {
    double sc = 0.0;
    for (const auto& c : f) sc = std::max(sc, c.max_abs_coeff());
    for (const auto& c : g) sc = std::max(sc, c.max_abs_coeff());
    const double tol = 1e-13 * std::max(1.0, sc);
    const int df = bipoly_degree(f, tol);
    const int dg = bipoly_degree(g, tol);
    if (df < 0 || dg < 0) return Polynomial();
    if (df == 0 && dg == 0) return Polynomial::constant(1.0);

    const int n = df + dg;
    std::vector<std::vector<Polynomial>> syl(
        static_cast<std::size_t>(n), std::vector<Polynomial>(static_cast<std::size_t>(n)));
    for (int r = 0; r < dg; ++r)
        for (int j = 0; j <= df; ++j)
            syl[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] =
                f[static_cast<std::size_t>(df - j)];
    for (int r = 0; r < df; ++r)
        for (int j = 0; j <= dg; ++j)
            syl[static_cast<std::size_t>(dg + r)][static_cast<std::size_t>(r + j)] =
                g[static_cast<std::size_t>(dg - j)];
    return PolyDet(std::move(syl)).run();
}

}  // namespace tcpkit
