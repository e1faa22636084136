#include "tcpkit/classes.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "tcpkit/parallel.hpp"
#include "tcpkit/polynomial.hpp"
#include "tcpkit/rng.hpp"
#include "tcpkit/slice.hpp"

namespace tcpkit {

std::string to_string(ClassId c) {
    switch (c) {
        case ClassId::SemiPositive: return "semi-positive";
        case ClassId::StrictlySemiPositive: return "strictly-semi-positive";
        case ClassId::P0: return "P0";
        case ClassId::P: return "P";
        case ClassId::WP: return "wP";
        case ClassId::StrictlyCopositive: return "strictly-copositive";
        case ClassId::PositiveDefinite: return "positive-definite";
        case ClassId::R: return "R";
        case ClassId::R0: return "R0";
        case ClassId::ER: return "ER";
        case ClassId::Q: return "Q";
    }
    return "?";
}

ClassId class_from_string(const std::string& name) {
    for (ClassId c : all_classes())
        if (to_string(c) == name) return c;
    throw std::invalid_argument("unknown tensor class: " + name);
}

std::vector<ClassId> all_classes() {
    return {ClassId::SemiPositive, ClassId::StrictlySemiPositive, ClassId::P0,
            ClassId::P,            ClassId::WP,                   ClassId::StrictlyCopositive,
            ClassId::PositiveDefinite, ClassId::R,                ClassId::R0,
            ClassId::ER,           ClassId::Q};
}

bool is_cone_system(ClassId c) {
    switch (c) {
        case ClassId::SemiPositive:
        case ClassId::StrictlySemiPositive:
        case ClassId::StrictlyCopositive:
        case ClassId::R:
        case ClassId::R0:
        case ClassId::ER:
            return true;
        default:
            return false;
    }
}

bool has_t_parameter(ClassId c) { return c == ClassId::R || c == ClassId::ER; }

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Member: return "Member";
        case VerdictStatus::NonMember: return "NonMember";
        case VerdictStatus::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

double max_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double two_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

int ipow_int(int b, int e) {
    int r = 1;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

}  // namespace

double witness_residual(const Tensor& a, ClassId c, std::span<const double> x,
                        std::optional<double> t) {
    const int n = a.dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("witness dimension mismatch");
    const std::vector<double> p = tcpkit::apply(a, x);
    double worst = 0.0;
    auto eq = [&](double v) { worst = std::max(worst, std::abs(v)); };
    auto ge0 = [&](double v) { worst = std::max(worst, std::max(0.0, -v)); };
    auto le0 = [&](double v) { worst = std::max(worst, std::max(0.0, v)); };

    if (is_cone_system(c))
        for (int i = 0; i < n; ++i) ge0(x[i]);

    switch (c) {
        case ClassId::ER: {
            const double tv = t.value_or(0.0);
            ge0(tv);
            for (int i = 0; i < n; ++i)
                x[i] > 0.0 ? eq(p[i] + tv * x[i]) : ge0(p[i]);
            break;
        }
        case ClassId::R: {
            const double tv = t.value_or(0.0);
            ge0(tv);
            for (int i = 0; i < n; ++i) x[i] > 0.0 ? eq(p[i] + tv) : ge0(p[i] + tv);
            break;
        }
        case ClassId::R0:
            for (int i = 0; i < n; ++i) x[i] > 0.0 ? eq(p[i]) : ge0(p[i]);
            break;
        case ClassId::SemiPositive:
        case ClassId::StrictlySemiPositive:
            for (int i = 0; i < n; ++i)
                if (x[i] > 0.0) le0(p[i]);
            break;
        case ClassId::StrictlyCopositive:
        case ClassId::PositiveDefinite:
            le0(form(a, x));
            break;
        case ClassId::P0:
            for (int i = 0; i < n; ++i)
                if (x[i] != 0.0) le0(x[i] * p[i]);
            break;
        case ClassId::P:
            for (int i = 0; i < n; ++i) le0(x[i] * p[i]);
            break;
        case ClassId::WP:
            for (int i = 0; i < n; ++i) {
                double xm = 1.0;
                for (int k = 0; k < a.order() - 1; ++k) xm *= x[i];
                le0(xm * p[i]);
            }
            break;
        case ClassId::Q:
            throw CapabilityError("Q has no failure-witness system");
    }
    return worst;
}

namespace {

/// Snaps, normalizes onto the class slice, derives t where the system has
/// one, and accepts the point only if the closed-system residual and the
/// strict-inequality margins both hold.
std::optional<Witness> validate_candidate(const Tensor& a, ClassId c,
                                          std::span<const double> x_raw,
                                          const Tolerances& tol) {
    const int n = a.dim();
    std::vector<double> x(x_raw.begin(), x_raw.end());
    for (double v : x)
        if (!std::isfinite(v)) return std::nullopt;
    for (double& v : x)
        if (std::abs(v) <= tol.snap) v = 0.0;
    if (is_cone_system(c))
        for (double v : x)
            if (v < 0.0) return std::nullopt;

    const double norm = is_cone_system(c) ? max_norm(x) : two_norm(x);
    if (norm == 0.0) return std::nullopt;
    for (double& v : x) v /= norm;
    // renormalized values may re-enter the snap band
    for (double& v : x)
        if (std::abs(v) <= tol.snap) v = 0.0;
    if (max_norm(x) == 0.0) return std::nullopt;

    std::optional<double> t;
    if (has_t_parameter(c)) {
        const std::vector<double> p = tcpkit::apply(a, x);
        int i0 = -1;
        for (int i = 0; i < n; ++i)
            if (x[i] > 0.0) { i0 = i; break; }
        if (i0 < 0) return std::nullopt;
        double tv = c == ClassId::ER ? -p[i0] / x[i0] : -p[i0];
        if (tv < -tol.witness_residual) return std::nullopt;
        t = std::max(tv, 0.0);
    }

    const double res = witness_residual(a, c, x, t);
    if (!(res <= tol.witness_residual)) return std::nullopt;

    // strict branches: semi-positive needs (Ax^{m-1})_i < 0 on the support,
    // P0 needs x_i (Ax^{m-1})_i < 0 wherever x_i != 0
    if (c == ClassId::SemiPositive || c == ClassId::P0) {
        const std::vector<double> p = tcpkit::apply(a, x);
        for (int i = 0; i < n; ++i) {
            if (c == ClassId::SemiPositive) {
                if (x[i] > 0.0 && !(p[i] <= -tol.strict_margin)) return std::nullopt;
            } else {
                if (x[i] != 0.0 && !(x[i] * p[i] <= -tol.strict_margin)) return std::nullopt;
            }
        }
    }

    return Witness{std::move(x), t, res, c};
}

// ------------------------------------------------------------------
// exhaustive search for dim <= 2: support/sign case split on the slice
// ------------------------------------------------------------------

struct EdgeCase {
    std::vector<double> base, dir;
    double lo, hi;
    bool open_lo, open_hi;
    int pin;  // index of the fixed +-1 coordinate
    int mov;  // index of the moving coordinate
};

struct EdgeSystem {
    std::vector<Polynomial> equalities;
    std::vector<Polynomial> nonneg;   // value(s) >= 0 required
    std::vector<Polynomial> strict;   // value(s) > 0 required
};

EdgeSystem build_edge_system(const Tensor& a, ClassId c, const EdgeCase& e) {
    const std::vector<Polynomial> p = restrict_to_line(a, e.base, e.dir);
    const Polynomial s = Polynomial::variable();
    const Polynomial ppin = p[static_cast<std::size_t>(e.pin)];
    const Polynomial pmov = p[static_cast<std::size_t>(e.mov)];
    const double sigma = e.base[static_cast<std::size_t>(e.pin)];
    const int m = a.order();

    EdgeSystem sys;
    switch (c) {
        case ClassId::ER:
            // t = -p_pin from the pinned equation, t >= 0
            sys.equalities.push_back(pmov - ppin * s);
            sys.nonneg.push_back(-ppin);
            break;
        case ClassId::R:
            sys.equalities.push_back(pmov - ppin);
            sys.nonneg.push_back(-ppin);
            break;
        case ClassId::R0:
            sys.equalities.push_back(ppin);
            sys.equalities.push_back(pmov);
            break;
        case ClassId::SemiPositive:
            sys.strict.push_back(-ppin);
            sys.strict.push_back(-pmov);
            break;
        case ClassId::StrictlySemiPositive:
            sys.nonneg.push_back(-ppin);
            sys.nonneg.push_back(-pmov);
            break;
        case ClassId::StrictlyCopositive:
        case ClassId::PositiveDefinite:
            sys.nonneg.push_back(-(ppin * sigma + pmov * s));
            break;
        case ClassId::P0:
            sys.strict.push_back(-(ppin * sigma));
            sys.strict.push_back(-(pmov * s));
            break;
        case ClassId::P:
            sys.nonneg.push_back(-(ppin * sigma));
            sys.nonneg.push_back(-(pmov * s));
            break;
        case ClassId::WP: {
            double sig_pow = 1.0;
            for (int k = 0; k < m - 1; ++k) sig_pow *= sigma;
            Polynomial s_pow = Polynomial::constant(1.0);
            for (int k = 0; k < m - 1; ++k) s_pow = s_pow * s;
            sys.nonneg.push_back(-(ppin * sig_pow));
            sys.nonneg.push_back(-(s_pow * pmov));
            break;
        }
        case ClassId::Q:
            throw CapabilityError("Q has no failure-witness system");
    }
    return sys;
}

std::optional<Witness> solve_edge_case(const Tensor& a, ClassId c, const EdgeCase& e,
                                       const Tolerances& tol) {
    EdgeSystem sys = build_edge_system(a, c, e);
    const double scale = std::max(1.0, a.max_abs_entry());
    const double vac = 1e-12 * scale;

    std::vector<double> candidates;
    std::vector<Polynomial> eqs;
    for (const Polynomial& q : sys.equalities)
        if (!q.is_zero(vac)) eqs.push_back(q);

    if (!eqs.empty()) {
        candidates = real_roots(eqs[0], e.lo, e.hi);
    } else {
        // pure inequality system: on each interval between constraint roots
        // every constraint has constant sign, so testing breakpoints and
        // midpoints decides the whole edge
        std::vector<double> brk{e.lo, e.hi};
        if (e.lo < 0.0 && e.hi > 0.0) brk.push_back(0.0);
        for (const Polynomial& q : sys.nonneg)
            for (double r : real_roots(q, e.lo, e.hi)) brk.push_back(r);
        for (const Polynomial& q : sys.strict)
            for (double r : real_roots(q, e.lo, e.hi)) brk.push_back(r);
        std::sort(brk.begin(), brk.end());
        brk.erase(std::unique(brk.begin(), brk.end(),
                              [](double u, double v) { return std::abs(u - v) < 1e-12; }),
                  brk.end());
        candidates = brk;
        for (std::size_t k = 0; k + 1 < brk.size(); ++k)
            candidates.push_back(0.5 * (brk[k] + brk[k + 1]));
    }

    const int n = a.dim();
    for (double s : candidates) {
        if (e.open_lo && s <= e.lo + 1e-9) continue;
        if (e.open_hi && s >= e.hi - 1e-9) continue;
        if (s < e.lo - 1e-9 || s > e.hi + 1e-9) continue;
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] =
                e.base[static_cast<std::size_t>(i)] + s * e.dir[static_cast<std::size_t>(i)];
        if (auto w = validate_candidate(a, c, x, tol)) return w;
    }
    return std::nullopt;
}

std::vector<std::vector<double>> canonical_points(int n, bool cone) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        pts.push_back(e);
    }
    if (!cone)
        for (int i = 0; i < n; ++i) {
            std::vector<double> e(static_cast<std::size_t>(n), 0.0);
            e[static_cast<std::size_t>(i)] = -1.0;
            pts.push_back(e);
        }
    pts.push_back(std::vector<double>(static_cast<std::size_t>(n), 1.0));
    if (!cone) pts.push_back(std::vector<double>(static_cast<std::size_t>(n), -1.0));
    return pts;
}

std::optional<Witness> exhaustive_small(const Tensor& a, ClassId c, const Tolerances& tol,
                                        BudgetUsed& used) {
    const int n = a.dim();
    const bool cone = is_cone_system(c);

    for (const auto& pt : canonical_points(n, cone)) {
        ++used.starts;
        if (auto w = validate_candidate(a, c, pt, tol)) return w;
    }
    if (n == 1) return std::nullopt;

    std::vector<EdgeCase> edges;
    auto unit = [&](int i, double sgn) {
        std::vector<double> e(2, 0.0);
        e[static_cast<std::size_t>(i)] = sgn;
        return e;
    };
    if (cone) {
        edges.push_back({unit(0, 1.0), unit(1, 1.0), 0.0, 1.0, true, false, 0, 1});
        edges.push_back({unit(1, 1.0), unit(0, 1.0), 0.0, 1.0, true, true, 1, 0});
    } else {
        edges.push_back({unit(0, 1.0), unit(1, 1.0), -1.0, 1.0, false, false, 0, 1});
        edges.push_back({unit(0, -1.0), unit(1, 1.0), -1.0, 1.0, false, false, 0, 1});
        edges.push_back({unit(1, 1.0), unit(0, 1.0), -1.0, 1.0, true, true, 1, 0});
        edges.push_back({unit(1, -1.0), unit(0, 1.0), -1.0, 1.0, true, true, 1, 0});
    }
    for (const EdgeCase& e : edges) {
        ++used.starts;
        if (auto w = solve_edge_case(a, c, e, tol)) return w;
    }
    return std::nullopt;
}

// ------------------------------------------------------------------
// multistart search for dim >= 3
// ------------------------------------------------------------------

// Fischer-Burmeister value and partials, with the usual subgradient pick
// at the origin.
void fb(double av, double bv, double& phi, double& da, double& db) {
    const double r = std::hypot(av, bv);
    phi = r - av - bv;
    if (r > 1e-14) {
        da = av / r - 1.0;
        db = bv / r - 1.0;
    } else {
        da = -1.0;
        db = -1.0;
    }
}

std::optional<Witness> fb_cone_start(const Tensor& a, ClassId c, long start,
                                     const SearchBudget& budget, BudgetUsed& used) {
    const int n = a.dim();
    const int pin = static_cast<int>(start % n);
    Rng rng = Rng(budget.seed).spawn(static_cast<std::uint64_t>(start) + 101);

    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform();
    x[pin] = 1.0;
    double tau = has_t_parameter(c) ? 0.3 + rng.uniform() : 0.0;

    const int nu = (n - 1) + (has_t_parameter(c) ? 1 : 0);
    Eigen::VectorXd phi(n), da(n), db(n);
    auto eval = [&](const Eigen::VectorXd& xv, double tauv, Eigen::VectorXd& out) {
        const double t = tauv * tauv;
        std::vector<double> xs(xv.data(), xv.data() + n);
        const std::vector<double> p = tcpkit::apply(a, xs);
        for (int i = 0; i < n; ++i) {
            double y = p[i];
            if (c == ClassId::ER) y += t * xv[i];
            if (c == ClassId::R) y += t;
            double d1, d2;
            fb(xv[i], y, out[i], d1, d2);
        }
    };

    for (long it = 0; it < budget.max_iters; ++it) {
        ++used.iters;
        const double t = tau * tau;
        std::vector<double> xs(x.data(), x.data() + n);
        const std::vector<double> p = tcpkit::apply(a, xs);
        const std::vector<double> jp = apply_jacobian(a, xs);
        double merit = 0.0;
        for (int i = 0; i < n; ++i) {
            double y = p[i];
            if (c == ClassId::ER) y += t * x[i];
            if (c == ClassId::R) y += t;
            fb(x[i], y, phi[i], da[i], db[i]);
            merit += 0.5 * phi[i] * phi[i];
        }
        if (phi.lpNorm<Eigen::Infinity>() <= 1e-11) break;

        Eigen::MatrixXd J(n, nu);
        for (int i = 0; i < n; ++i) {
            int col = 0;
            for (int j = 0; j < n; ++j) {
                if (j == pin) continue;
                double dy = jp[static_cast<std::size_t>(i) * n + j];
                if (c == ClassId::ER && i == j) dy += t;
                J(i, col++) = (i == j ? da[i] : 0.0) + db[i] * dy;
            }
            if (has_t_parameter(c)) {
                const double dydtau = c == ClassId::ER ? 2.0 * tau * x[i] : 2.0 * tau;
                J(i, col) = db[i] * dydtau;
            }
        }
        Eigen::VectorXd step = J.colPivHouseholderQr().solve(-phi);
        if (!step.allFinite()) break;

        double alpha = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            Eigen::VectorXd xn = x;
            int col = 0;
            for (int j = 0; j < n; ++j) {
                if (j == pin) continue;
                xn[j] += alpha * step[col++];
            }
            double taun = tau;
            if (has_t_parameter(c)) taun += alpha * step[col];
            Eigen::VectorXd phin(n);
            eval(xn, taun, phin);
            if (0.5 * phin.squaredNorm() < merit * (1.0 - 1e-4 * alpha)) {
                x = xn;
                tau = taun;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
    }

    Eigen::VectorXd phi_final(n);
    eval(x, tau, phi_final);
    if (phi_final.lpNorm<Eigen::Infinity>() > 1e-8) return std::nullopt;
    std::vector<double> xs(x.data(), x.data() + n);
    return validate_candidate(a, c, xs, budget.tol);
}

std::optional<Witness> descent_start(const Tensor& a, ClassId c, long start,
                                     const SearchBudget& budget, BudgetUsed& used) {
    const int n = a.dim();
    const int m = a.order();
    const bool cone = is_cone_system(c);
    Rng rng = Rng(budget.seed).spawn(static_cast<std::uint64_t>(start) + 577);

    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = cone ? rng.uniform() : rng.uniform(-1.0, 1.0);
    if (cone && start % 3 == 1) {
        // sparse support guesses
        for (double& v : x)
            if (rng.uniform() < 0.5) v = 0.0;
    }
    auto normalize = [&](std::vector<double>& v) {
        const double nm = cone ? max_norm(v) : two_norm(v);
        if (nm <= 1e-14) {
            v.assign(static_cast<std::size_t>(n), 0.0);
            v[0] = 1.0;
        } else {
            for (double& u : v) u /= nm;
        }
    };
    normalize(x);

    // worst violated constraint value and its index (-1 for the form classes)
    auto worst_value = [&](const std::vector<double>& v, int& idx) {
        const std::vector<double> p = tcpkit::apply(a, v);
        double h = -std::numeric_limits<double>::infinity();
        idx = -1;
        if (c == ClassId::StrictlyCopositive || c == ClassId::PositiveDefinite)
            return form(a, v);
        for (int i = 0; i < n; ++i) {
            double val;
            switch (c) {
                case ClassId::SemiPositive:
                case ClassId::StrictlySemiPositive:
                    if (v[static_cast<std::size_t>(i)] <= 1e-7) continue;
                    val = p[static_cast<std::size_t>(i)];
                    break;
                case ClassId::P0:
                    if (std::abs(v[static_cast<std::size_t>(i)]) <= 1e-7) continue;
                    val = v[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
                    break;
                case ClassId::P:
                    val = v[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
                    break;
                case ClassId::WP: {
                    double xm = 1.0;
                    for (int k = 0; k < m - 1; ++k) xm *= v[static_cast<std::size_t>(i)];
                    val = xm * p[static_cast<std::size_t>(i)];
                    break;
                }
                default:
                    val = 0.0;
            }
            if (val > h) {
                h = val;
                idx = i;
            }
        }
        return h;
    };

    double eta = 0.2;
    int idx;
    double h = worst_value(x, idx);
    for (long it = 0; it < budget.max_iters && h > -1e-12; ++it) {
        ++used.iters;
        const std::vector<double> p = tcpkit::apply(a, x);
        const std::vector<double> jp = apply_jacobian(a, x);
        std::vector<double> g(static_cast<std::size_t>(n), 0.0);
        if (c == ClassId::StrictlyCopositive || c == ClassId::PositiveDefinite) {
            for (int j = 0; j < n; ++j) {
                g[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)];
                for (int i = 0; i < n; ++i)
                    g[static_cast<std::size_t>(j)] +=
                        x[static_cast<std::size_t>(i)] * jp[static_cast<std::size_t>(i) * n + j];
            }
        } else if (idx >= 0) {
            const double xi = x[static_cast<std::size_t>(idx)];
            for (int j = 0; j < n; ++j) {
                const double dj = jp[static_cast<std::size_t>(idx) * n + j];
                switch (c) {
                    case ClassId::SemiPositive:
                    case ClassId::StrictlySemiPositive:
                        g[static_cast<std::size_t>(j)] = dj;
                        break;
                    case ClassId::P0:
                    case ClassId::P:
                        g[static_cast<std::size_t>(j)] =
                            xi * dj + (j == idx ? p[static_cast<std::size_t>(idx)] : 0.0);
                        break;
                    case ClassId::WP: {
                        double xm1 = 1.0;
                        for (int k = 0; k < m - 2; ++k) xm1 *= xi;
                        const double xm = xm1 * xi;
                        g[static_cast<std::size_t>(j)] =
                            xm * dj + (j == idx ? (m - 1) * xm1 * p[static_cast<std::size_t>(idx)] : 0.0);
                        break;
                    }
                    default:
                        break;
                }
            }
        } else {
            break;
        }
        double gn = two_norm(g);
        if (gn <= 1e-14) break;
        bool improved = false;
        for (int bt = 0; bt < 8; ++bt) {
            std::vector<double> xn = x;
            for (int j = 0; j < n; ++j)
                xn[static_cast<std::size_t>(j)] -= eta / gn * g[static_cast<std::size_t>(j)];
            if (cone)
                for (double& v : xn) v = std::max(v, 0.0);
            normalize(xn);
            int idxn;
            const double hn = worst_value(xn, idxn);
            if (hn < h) {
                x = xn;
                h = hn;
                idx = idxn;
                improved = true;
                eta = std::min(eta * 1.5, 1.0);
                break;
            }
            eta *= 0.4;
        }
        if (!improved) break;
    }
    return validate_candidate(a, c, x, budget.tol);
}

std::optional<Witness> multistart_search(const Tensor& a, ClassId c,
                                         const SearchBudget& budget, BudgetUsed& used) {
    const Deadline deadline = deadline_after_ms(budget.time_ms);
    const bool equality_class =
        c == ClassId::ER || c == ClassId::R || c == ClassId::R0;
    std::function<std::optional<Witness>(long)> one = [&](long k) {
        BudgetUsed local;  // merged coarsely; exact counters matter only for reports
        auto r = equality_class ? fb_cone_start(a, c, k, budget, local)
                                : descent_start(a, c, k, budget, local);
        used.iters += local.iters;
        return r;
    };
    auto w = first_success<Witness>(budget.max_starts, budget.threads, deadline, one);
    used.starts += budget.max_starts;
    return w;
}

}  // namespace

std::optional<Witness> witness_search(const Tensor& a, ClassId c,
                                      const SearchBudget& budget) {
    budget.validate();
    if (c == ClassId::Q)
        throw CapabilityError("Q has no failure-witness system");
    if (c == ClassId::PositiveDefinite && a.order() % 2 == 1)
        throw CapabilityError(
            "positive definiteness is rejected as a query for odd order");
    BudgetUsed used;
    if (a.dim() <= 2) return exhaustive_small(a, c, budget.tol, used);
    for (const auto& pt : canonical_points(a.dim(), is_cone_system(c)))
        if (auto w = validate_candidate(a, c, pt, budget.tol)) return w;
    return multistart_search(a, c, budget, used);
}

namespace {

Witness analytic_odd_order_witness(const Tensor& a, ClassId c, const Tolerances& tol) {
    const int n = a.dim();
    std::vector<double> e1(static_cast<std::size_t>(n), 0.0);
    e1[0] = 1.0;
    const double head = c == ClassId::P ? tcpkit::apply(a, e1)[0] : form(a, e1);
    std::vector<double> x = e1;
    if (head > 0.0) x[0] = -1.0;  // odd order flips the sign of the product/form
    const double res = witness_residual(a, c, x, std::nullopt);
    (void)tol;
    return Witness{std::move(x), std::nullopt, res, c};
}

}  // namespace

Verdict classify(const Tensor& a, ClassId c, const SearchBudget& budget) {
    budget.validate();
    Verdict v;
    v.method = "multistart";

    if (c == ClassId::Q) {
        // no direct search: membership only by implication through ER or R
        for (ClassId via : {ClassId::ER, ClassId::R}) {
            Verdict inner = classify(a, via, budget);
            v.budget_used.starts += inner.budget_used.starts;
            v.budget_used.iters += inner.budget_used.iters;
            if (inner.status == VerdictStatus::Member) {
                v.status = VerdictStatus::Member;
                v.method = "analytic";
                return v;
            }
        }
        v.status = VerdictStatus::Unknown;
        v.method = "analytic";
        return v;
    }

    const bool odd = a.order() % 2 == 1;
    if (odd && (c == ClassId::P || c == ClassId::PositiveDefinite)) {
        // no odd-order tensor passes: the defining sign flips under x -> -x
        v.status = VerdictStatus::NonMember;
        v.method = "analytic";
        v.witness = analytic_odd_order_witness(a, c, budget.tol);
        return v;
    }

    if (a.min_entry() > 0.0) {
        static const ClassId positive_members[] = {
            ClassId::SemiPositive, ClassId::StrictlySemiPositive,
            ClassId::StrictlyCopositive, ClassId::ER, ClassId::R, ClassId::R0};
        for (ClassId pc : positive_members)
            if (pc == c) {
                v.status = VerdictStatus::Member;
                v.method = "analytic";
                return v;
            }
    }

    BudgetUsed used;
    std::optional<Witness> w;
    if (a.dim() <= 2) {
        w = exhaustive_small(a, c, budget.tol, used);
        v.method = "exhaustive-n2";
    } else {
        for (const auto& pt : canonical_points(a.dim(), is_cone_system(c))) {
            ++used.starts;
            if ((w = validate_candidate(a, c, pt, budget.tol))) break;
        }
        if (!w) w = multistart_search(a, c, budget, used);
    }
    v.budget_used = used;
    if (w) {
        v.status = VerdictStatus::NonMember;
        v.witness = std::move(w);
    } else {
        v.status = a.dim() <= 2 ? VerdictStatus::Member : VerdictStatus::Unknown;
    }
    return v;
}

std::map<ClassId, Verdict> classify_all(const Tensor& a, const SearchBudget& budget) {
    std::map<ClassId, Verdict> out;
    for (ClassId c : all_classes()) out.emplace(c, classify(a, c, budget));
    return out;
}

namespace {

struct Rule {
    const char* name;
    ClassId antecedent;
    ClassId consequent;
};

constexpr ClassId kEquiv[] = {ClassId::R0, ClassId::ER, ClassId::R};

const Rule kRules[] = {
    {"strictly semi-positive implies ER", ClassId::StrictlySemiPositive, ClassId::ER},
    {"strictly semi-positive implies semi-positive", ClassId::StrictlySemiPositive,
     ClassId::SemiPositive},
    {"strictly semi-positive implies R", ClassId::StrictlySemiPositive, ClassId::R},
    {"ER implies R0", ClassId::ER, ClassId::R0},
    {"wP implies ER", ClassId::WP, ClassId::ER},
    {"R implies R0", ClassId::R, ClassId::R0},
    {"P0 implies semi-positive", ClassId::P0, ClassId::SemiPositive},
    {"P implies strictly semi-positive", ClassId::P, ClassId::StrictlySemiPositive},
    {"positive definite implies P", ClassId::PositiveDefinite, ClassId::P},
    {"strictly copositive implies strictly semi-positive", ClassId::StrictlyCopositive,
     ClassId::StrictlySemiPositive},
    {"ER implies Q", ClassId::ER, ClassId::Q},
};

VerdictStatus status_of(const std::map<ClassId, Verdict>& m, ClassId c) {
    auto it = m.find(c);
    return it == m.end() ? VerdictStatus::Unknown : it->second.status;
}

}  // namespace

std::vector<AuditViolation> implication_audit(const Tensor& a,
                                              const std::map<ClassId, Verdict>& verdicts) {
    std::vector<AuditViolation> out;
    for (const Rule& r : kRules) {
        if (status_of(verdicts, r.antecedent) == VerdictStatus::Member &&
            status_of(verdicts, r.consequent) == VerdictStatus::NonMember) {
            out.push_back({r.name, to_string(r.antecedent) + " is Member but " +
                                       to_string(r.consequent) + " is NonMember"});
        }
    }
    for (ClassId gate : {ClassId::SemiPositive, ClassId::P0}) {
        if (status_of(verdicts, gate) != VerdictStatus::Member) continue;
        for (ClassId x : kEquiv)
            for (ClassId y : kEquiv) {
                if (x == y) continue;
                if (status_of(verdicts, x) == VerdictStatus::Member &&
                    status_of(verdicts, y) == VerdictStatus::NonMember) {
                    out.push_back(
                        {"within semi-positive (or P0) tensors R0, ER and R coincide",
                         "under " + to_string(gate) + " membership, " + to_string(x) +
                             " is Member but " + to_string(y) + " is NonMember"});
                }
            }
    }
    // a stored witness must still certify against this tensor
    for (const auto& [cls, verdict] : verdicts) {
        if (verdict.status != VerdictStatus::NonMember || !verdict.witness) continue;
        if (cls == ClassId::Q) continue;  // no system to check against
        if (static_cast<int>(verdict.witness->x.size()) != a.dim()) continue;
        const double res =
            witness_residual(a, cls, verdict.witness->x, verdict.witness->t);
        if (!(res <= 1e-8))
            out.push_back({"witness fails to certify",
                           to_string(cls) + " witness residual " + std::to_string(res)});
    }
    return out;
}

std::vector<HeredityViolation> subtensor_heredity_check(
    const Tensor& a, ClassId c, const SearchBudget& budget,
    const std::optional<Verdict>& parent) {
    if (c != ClassId::ER)
        throw CapabilityError("heredity check is defined for the ER class");
    budget.validate();
    const Verdict parent_v = parent ? *parent : classify(a, c, budget);
    std::vector<HeredityViolation> out;
    if (parent_v.status != VerdictStatus::Member) return out;

    const int n = a.dim();
    if (n > 16) throw std::invalid_argument("heredity check limited to dim <= 16");
    for (int mask = 1; mask < ipow_int(2, n); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) subset.push_back(i + 1);
        const Tensor sub = principal_subtensor(a, IndexSet(subset, n));
        Verdict v = classify(sub, ClassId::ER, budget);
        if (v.status != VerdictStatus::NonMember) continue;
        // A subtensor witness contradicts the parent's claimed membership
        // only when its zero extension also satisfies the off-support sign
        // conditions of the full system.
        if (!v.witness) continue;
        std::vector<double> extended(static_cast<std::size_t>(n), 0.0);
        for (std::size_t k = 0; k < subset.size(); ++k)
            extended[static_cast<std::size_t>(subset[k] - 1)] = v.witness->x[k];
        const double res = witness_residual(a, ClassId::ER, extended, v.witness->t);
        if (res <= budget.tol.witness_residual)
            out.push_back({std::move(subset), std::move(v)});
    }
    return out;
}

}  // namespace tcpkit
