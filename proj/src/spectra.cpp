#include "tcpkit/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

#include "tcpkit/polynomial.hpp"
#include "tcpkit/rng.hpp"
#include "tcpkit/slice.hpp"

namespace tcpkit {

std::string to_string(EigKind k) { return k == EigKind::H ? "H" : "Z"; }

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double u : v) m = std::max(m, std::abs(u));
    return m;
}

[[maybe_unused]] double two_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double u : v) s += u * u;
    return std::sqrt(s);
}

std::vector<double> pow_components(const std::vector<double>& x, int e) {
    std::vector<double> r(x.size(), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int k = 0; k < e; ++k) r[i] *= x[i];
    return r;
}

void canonicalize_sign(std::vector<double>& x) {
    for (double v : x) {
        if (v > 0.0) return;
        if (v < 0.0) break;
    }
    for (double& v : x) v = -v;
}

bool close_pair(const EigenPair& a, const EigenPair& b, double tol) {
    if (std::abs(a.lambda - b.lambda) > tol) return false;
    double d = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i)
        d = std::max(d, std::abs(a.x[i] - b.x[i]));
    return d <= tol;
}

void insert_pair(std::vector<EigenPair>& pairs, EigenPair p, double tol) {
    for (const EigenPair& q : pairs)
        if (close_pair(p, q, tol)) return;
    pairs.push_back(std::move(p));
}

void sort_pairs(std::vector<EigenPair>& pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.x < b.x;
    });
}

}  // namespace

double eig_residual(const Tensor& a, const EigenPair& pair) {
    const std::vector<double> p = tcpkit::apply(a, pair.x);
    double worst = 0.0;
    if (pair.kind == EigKind::Z) {
        for (std::size_t i = 0; i < pair.x.size(); ++i)
            worst = std::max(worst, std::abs(p[i] - pair.lambda * pair.x[i]));
    } else {
        const std::vector<double> xm = pow_components(pair.x, a.order() - 1);
        for (std::size_t i = 0; i < pair.x.size(); ++i)
            worst = std::max(worst, std::abs(p[i] - pair.lambda * xm[i]));
    }
    return worst;
}

namespace {

// ---------------------------- Z, dim 2 ----------------------------

// defect orthogonal to x(theta) on the unit circle
double z_defect(const Tensor& a, double theta) {
    const std::vector<double> x{std::cos(theta), std::sin(theta)};
    const std::vector<double> p = tcpkit::apply(a, x);
    return -x[1] * p[0] + x[0] * p[1];
}

std::optional<EigenPair> z_pair_at(const Tensor& a, double theta, double tol_res) {
    // damped Newton on the scalar defect
    double th = theta;
    double g = z_defect(a, th);
    for (int it = 0; it < 80 && std::abs(g) > 0.0; ++it) {
        const double h = 1e-7;
        const double dg = (z_defect(a, th + h) - z_defect(a, th - h)) / (2.0 * h);
        if (std::abs(dg) < 1e-14) break;
        double step = -g / dg;
        bool moved = false;
        for (int halve = 0; halve < 50; ++halve) {
            const double cand = th + step;
            const double gc = z_defect(a, cand);
            if (std::abs(gc) < std::abs(g)) {
                th = cand;
                g = gc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    std::vector<double> x{std::cos(th), std::sin(th)};
    for (double& v : x)
        if (std::abs(v) <= 1e-14) v = 0.0;
    const double nrm = std::hypot(x[0], x[1]);
    x[0] /= nrm;
    x[1] /= nrm;
    const std::vector<double> p = tcpkit::apply(a, x);
    const double lambda = x[0] * p[0] + x[1] * p[1];
    EigenPair pair{EigKind::Z, lambda, x, 0.0};
    pair.residual = eig_residual(a, pair);
    if (pair.residual > tol_res) return std::nullopt;
    return pair;
}

std::vector<EigenPair> z_dim2(const Tensor& a, const SearchBudget& budget) {
    std::vector<EigenPair> pairs;
    const int grid = 100000;
    const double step = 2.0 * M_PI / grid;
    std::vector<double> g(static_cast<std::size_t>(grid));
    double gmax = 0.0;
    for (int k = 0; k < grid; ++k) {
        g[static_cast<std::size_t>(k)] = z_defect(a, k * step);
        gmax = std::max(gmax, std::abs(g[static_cast<std::size_t>(k)]));
    }
    const double scale = std::max(1.0, a.max_abs_entry());
    if (gmax <= 1e-12 * scale) {
        // radially-symmetric map: every direction is an eigenvector; report
        // the canonical axis representatives
        for (int i = 0; i < 2; ++i)
            if (auto p = z_pair_at(a, i * 0.5 * M_PI, budget.tol.eig_residual))
                insert_pair(pairs, std::move(*p), budget.tol.dedup);
        sort_pairs(pairs);
        return pairs;
    }
    for (int k = 0; k < grid; ++k) {
        const double g0 = g[static_cast<std::size_t>(k)];
        const double g1 = g[static_cast<std::size_t>((k + 1) % grid)];
        const bool sign_change = g0 == 0.0 || g0 * g1 < 0.0;
        const bool near_touch =
            std::abs(g0) < 1e-6 * scale &&
            std::abs(g0) <= std::abs(g[static_cast<std::size_t>((k + grid - 1) % grid)]) &&
            std::abs(g0) <= std::abs(g1);
        if (!sign_change && !near_touch) continue;
        double theta = k * step;
        if (sign_change && g0 != 0.0) {
            double lo = theta, hi = theta + step, glo = g0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = z_defect(a, mid);
                if (glo * gm <= 0.0) hi = mid;
                else { lo = mid; glo = gm; }
            }
            theta = 0.5 * (lo + hi);
        }
        if (auto p = z_pair_at(a, theta, budget.tol.eig_residual)) {
            if (a.order() % 2 == 0) canonicalize_sign(p->x);
            // recompute after any sign flip (even order keeps lambda)
            p->residual = eig_residual(a, *p);
            if (p->residual <= budget.tol.eig_residual)
                insert_pair(pairs, std::move(*p), budget.tol.dedup);
        }
    }
    sort_pairs(pairs);
    return pairs;
}

// ---------------------------- Z, general ----------------------------

std::vector<EigenPair> z_multistart(const Tensor& a, const SearchBudget& budget) {
    const int n = a.dim();
    std::vector<EigenPair> pairs;
    Rng rng(budget.seed);
    for (long k = 0; k < budget.max_starts; ++k) {
        Eigen::VectorXd x(n);
        if (k < n) {
            x.setZero();
            x[static_cast<int>(k)] = 1.0;
        } else {
            for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
            if (x.norm() < 1e-9) x[0] = 1.0;
        }
        x.normalize();
        std::vector<double> xs(x.data(), x.data() + n);
        std::vector<double> p = tcpkit::apply(a, xs);
        double lambda = 0.0;
        for (int i = 0; i < n; ++i) lambda += x[i] * p[i];

        for (long it = 0; it < budget.max_iters; ++it) {
            xs.assign(x.data(), x.data() + n);
            p = tcpkit::apply(a, xs);
            const std::vector<double> jp = apply_jacobian(a, xs);
            Eigen::VectorXd F(n + 1);
            for (int i = 0; i < n; ++i) F[i] = p[i] - lambda * x[i];
            F[n] = 0.5 * (x.squaredNorm() - 1.0);
            if (F.lpNorm<Eigen::Infinity>() <= 1e-12) break;
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j)
                    J(i, j) = jp[static_cast<std::size_t>(i) * n + j] - (i == j ? lambda : 0.0);
                J(i, n) = -x[i];
                J(n, i) = x[i];
            }
            Eigen::VectorXd step = J.fullPivLu().solve(-F);
            if (!step.allFinite()) break;
            const double f0 = F.squaredNorm();
            double alpha = 1.0;
            bool moved = false;
            for (int halve = 0; halve < 50; ++halve) {
                Eigen::VectorXd xn = x + alpha * step.head(n);
                const double ln = lambda + alpha * step[n];
                std::vector<double> xns(xn.data(), xn.data() + n);
                const std::vector<double> pn = tcpkit::apply(a, xns);
                Eigen::VectorXd Fn(n + 1);
                for (int i = 0; i < n; ++i) Fn[i] = pn[i] - ln * xn[i];
                Fn[n] = 0.5 * (xn.squaredNorm() - 1.0);
                if (Fn.squaredNorm() < f0) {
                    x = xn;
                    lambda = ln;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
        }
        if (std::abs(x.norm() - 1.0) > 1e-10) continue;
        std::vector<double> xv(x.data(), x.data() + n);
        for (double& v : xv)
            if (std::abs(v) <= 1e-14) v = 0.0;
        EigenPair pair{EigKind::Z, lambda, xv, 0.0};
        if (a.order() % 2 == 0) canonicalize_sign(pair.x);
        pair.residual = eig_residual(a, pair);
        if (pair.residual <= budget.tol.eig_residual)
            insert_pair(pairs, std::move(pair), budget.tol.dedup);
    }
    sort_pairs(pairs);
    return pairs;
}

// ---------------------------- H ----------------------------

std::optional<EigenPair> h_polish(const Tensor& a, std::vector<double> x, int pin,
                                  double lambda, const SearchBudget& budget) {
    const int n = a.dim();
    const int m = a.order();
    for (long it = 0; it < budget.max_iters; ++it) {
        const std::vector<double> p = tcpkit::apply(a, x);
        const std::vector<double> xm = pow_components(x, m - 1);
        Eigen::VectorXd F(n);
        for (int i = 0; i < n; ++i) F[i] = p[i] - lambda * xm[i];
        if (F.lpNorm<Eigen::Infinity>() <= 1e-13) break;
        const std::vector<double> jp = apply_jacobian(a, x);
        const std::vector<double> xm1 = pow_components(x, m - 2);
        Eigen::MatrixXd J(n, n);
        for (int i = 0; i < n; ++i) {
            int col = 0;
            for (int j = 0; j < n; ++j) {
                if (j == pin) continue;
                J(i, col++) = jp[static_cast<std::size_t>(i) * n + j] -
                              (i == j ? lambda * (m - 1) * xm1[static_cast<std::size_t>(i)] : 0.0);
            }
            J(i, n - 1) = -xm[static_cast<std::size_t>(i)];
        }
        Eigen::VectorXd step = J.fullPivLu().solve(-F);
        if (!step.allFinite()) break;
        const double f0 = F.squaredNorm();
        double alpha = 1.0;
        bool moved = false;
        for (int halve = 0; halve < 50; ++halve) {
            std::vector<double> xn = x;
            int col = 0;
            for (int j = 0; j < n; ++j) {
                if (j == pin) continue;
                xn[static_cast<std::size_t>(j)] += alpha * step[col++];
            }
            const double ln = lambda + alpha * step[n - 1];
            const std::vector<double> pn = tcpkit::apply(a, xn);
            const std::vector<double> xmn = pow_components(xn, m - 1);
            double fn = 0.0;
            for (int i = 0; i < n; ++i) {
                const double r = pn[i] - ln * xmn[static_cast<std::size_t>(i)];
                fn += r * r;
            }
            if (fn < f0) {
                x = xn;
                lambda = ln;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
    }
    const double nrm = inf_norm(x);
    if (nrm < 1e-12) return std::nullopt;
    // lambda is scale-invariant for the H equation, so land on the max slice
    for (double& v : x) v /= nrm;
    for (double& v : x)
        if (std::abs(v) <= 1e-14) v = 0.0;
    canonicalize_sign(x);
    EigenPair pair{EigKind::H, lambda, std::move(x), 0.0};
    pair.residual = eig_residual(a, pair);
    if (pair.residual > budget.tol.eig_residual) return std::nullopt;
    return pair;
}

std::vector<EigenPair> h_dim2(const Tensor& a, const SearchBudget& budget) {
    std::vector<EigenPair> pairs;
    const int m = a.order();
    // Representatives with the pinned coordinate +1 cover all pairs: x and
    // -x carry the same H-eigenvalue.
    for (int pin = 0; pin < 2; ++pin) {
        std::vector<double> base(2, 0.0), dir(2, 0.0);
        base[static_cast<std::size_t>(pin)] = 1.0;
        dir[static_cast<std::size_t>(1 - pin)] = 1.0;
        const std::vector<Polynomial> p = restrict_to_line(a, base, dir);
        Polynomial s_pow = Polynomial::constant(1.0);
        for (int k = 0; k < m - 1; ++k) s_pow = s_pow * Polynomial::variable();
        const Polynomial defect =
            p[static_cast<std::size_t>(1 - pin)] - p[static_cast<std::size_t>(pin)] * s_pow;
        if (defect.is_zero(1e-13 * std::max(1.0, a.max_abs_entry()))) {
            // every point of the edge solves the equation; keep corners
            for (double s : {0.0, 1.0, -1.0}) {
                std::vector<double> x = base;
                x[static_cast<std::size_t>(1 - pin)] = s;
                const double lambda = tcpkit::apply(a, x)[static_cast<std::size_t>(pin)];
                if (auto pr = h_polish(a, x, pin, lambda, budget))
                    insert_pair(pairs, std::move(*pr), budget.tol.dedup);
            }
            continue;
        }
        for (double s : real_roots(defect, -1.0, 1.0)) {
            std::vector<double> x = base;
            x[static_cast<std::size_t>(1 - pin)] = s;
            const double lambda = tcpkit::apply(a, x)[static_cast<std::size_t>(pin)];
            if (auto pr = h_polish(a, x, pin, lambda, budget))
                insert_pair(pairs, std::move(*pr), budget.tol.dedup);
        }
    }
    sort_pairs(pairs);
    return pairs;
}

std::vector<EigenPair> h_multistart(const Tensor& a, const SearchBudget& budget) {
    const int n = a.dim();
    std::vector<EigenPair> pairs;
    Rng rng(budget.seed);
    for (long k = 0; k < budget.max_starts; ++k) {
        std::vector<double> x(static_cast<std::size_t>(n));
        if (k < (1L << std::min(n, 16))) {
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] = (k >> i) & 1 ? -1.0 : 1.0;
        } else {
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
        }
        int pin = 0;
        for (int i = 0; i < n; ++i)
            if (std::abs(x[static_cast<std::size_t>(i)]) >
                std::abs(x[static_cast<std::size_t>(pin)]))
                pin = i;
        const double nrm = std::abs(x[static_cast<std::size_t>(pin)]);
        if (nrm < 1e-9) continue;
        for (double& v : x) v /= nrm;
        const std::vector<double> p = tcpkit::apply(a, x);
        const std::vector<double> xm = pow_components(x, a.order() - 1);
        const double lambda =
            p[static_cast<std::size_t>(pin)] / xm[static_cast<std::size_t>(pin)];
        if (auto pr = h_polish(a, x, pin, lambda, budget))
            insert_pair(pairs, std::move(*pr), budget.tol.dedup);
    }
    sort_pairs(pairs);
    return pairs;
}

std::vector<EigenPair> dim1_pairs(const Tensor& a, EigKind kind) {
    std::vector<int> idx(static_cast<std::size_t>(a.order()), 1);
    const double c = a.at(idx);
    std::vector<EigenPair> pairs;
    if (kind == EigKind::H) {
        pairs.push_back({EigKind::H, c, {1.0}, 0.0});
    } else {
        pairs.push_back({EigKind::Z, c, {1.0}, 0.0});
        if (a.order() % 2 == 1 && c != 0.0)
            pairs.push_back({EigKind::Z, -c, {-1.0}, 0.0});
    }
    sort_pairs(pairs);
    return pairs;
}

}  // namespace

std::vector<EigenPair> z_eigenpairs(const Tensor& a, const SearchBudget& budget) {
    budget.validate();
    if (a.dim() == 1) return dim1_pairs(a, EigKind::Z);
    if (a.dim() == 2) return z_dim2(a, budget);
    return z_multistart(a, budget);
}

std::vector<EigenPair> h_eigenpairs(const Tensor& a, const SearchBudget& budget) {
    budget.validate();
    if (a.dim() == 1) return dim1_pairs(a, EigKind::H);
    if (a.dim() == 2) return h_dim2(a, budget);
    return h_multistart(a, budget);
}

}  // namespace tcpkit
