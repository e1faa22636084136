#include "tcpkit/tcp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tcpkit/parallel.hpp"
#include "tcpkit/polynomial.hpp"
#include "tcpkit/rng.hpp"
#include "tcpkit/slice.hpp"

namespace tcpkit {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double u : v) m = std::max(m, std::abs(u));
    return m;
}

double two_norm(std::span<const double> v) {
    double s = 0.0;
    for (double u : v) s += u * u;
    return std::sqrt(s);
}

std::vector<double> f_value(const TcpInstance& inst, std::span<const double> x) {
    std::vector<double> f = tcpkit::apply(inst.a, x);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += inst.q[i];
    return f;
}

void residuals(const TcpInstance& inst, std::span<const double> x, double& feas,
               double& comp) {
    const std::vector<double> f = f_value(inst, x);
    double viol = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        viol = std::max(viol, -x[i]);
        viol = std::max(viol, -f[i]);
        dot += x[i] * f[i];
    }
    feas = std::max(0.0, viol);
    comp = std::abs(dot);
}

bool same_solution(const TcpSolution& a, const TcpSolution& b, double tol) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i)
        d = std::max(d, std::abs(a.x[i] - b.x[i]));
    return d <= tol;
}

void push_solution(std::vector<TcpSolution>& out, TcpSolution s, double tol) {
    for (const TcpSolution& t : out)
        if (same_solution(s, t, tol)) return;
    out.push_back(std::move(s));
}

void sort_solutions(std::vector<TcpSolution>& v) {
    std::sort(v.begin(), v.end(),
              [](const TcpSolution& a, const TcpSolution& b) { return a.x < b.x; });
}

// Newton refinement of {f_i = 0 on the support}, holding the rest at zero.
std::vector<double> active_set_polish(const TcpInstance& inst, std::vector<double> x,
                                      double support_tol) {
    const int n = inst.a.dim();
    std::vector<int> supp;
    for (int i = 0; i < n; ++i) {
        if (x[static_cast<std::size_t>(i)] > support_tol)
            supp.push_back(i);
        else
            x[static_cast<std::size_t>(i)] = 0.0;
    }
    if (supp.empty()) return x;
    const int k = static_cast<int>(supp.size());
    for (int it = 0; it < 40; ++it) {
        const std::vector<double> f = f_value(inst, x);
        Eigen::VectorXd F(k);
        for (int r = 0; r < k; ++r) F[r] = f[static_cast<std::size_t>(supp[r])];
        if (F.lpNorm<Eigen::Infinity>() <= 1e-14) break;
        const std::vector<double> jp = apply_jacobian(inst.a, x);
        Eigen::MatrixXd J(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                J(r, c) = jp[static_cast<std::size_t>(supp[r]) * n + supp[c]];
        Eigen::VectorXd step = J.fullPivLu().solve(-F);
        if (!step.allFinite()) break;
        bool ok = true;
        std::vector<double> xn = x;
        for (int r = 0; r < k; ++r) {
            xn[static_cast<std::size_t>(supp[r])] += step[r];
            if (!(xn[static_cast<std::size_t>(supp[r])] > 0.0)) ok = false;
        }
        if (!ok) break;
        const std::vector<double> fn = f_value(inst, xn);
        double worst = 0.0;
        for (int r = 0; r < k; ++r)
            worst = std::max(worst, std::abs(fn[static_cast<std::size_t>(supp[r])]));
        if (worst >= F.lpNorm<Eigen::Infinity>()) break;
        x = xn;
    }
    return x;
}

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

struct StartOutcome {
    std::optional<TcpSolution> solution;
    bool diverged = false;
    std::vector<std::vector<double>> tail;  // iterates with growing norms
    long iters = 0;
};

Eigen::VectorXd start_point(const TcpInstance& inst, long k, Rng& rng) {
    const int n = inst.a.dim();
    const int m = inst.a.order();
    Eigen::VectorXd x(n);
    switch (k) {
        case 0: x.setZero(); return x;
        case 1: x.setOnes(); return x;
        case 2:
            for (int i = 0; i < n; ++i)
                x[i] = std::pow(std::max(0.0, -inst.q[static_cast<std::size_t>(i)]),
                                1.0 / (m - 1));
            return x;
        case 3: x.setConstant(0.5); return x;
        case 4: x.setConstant(2.0); return x;
        case 5: x.setConstant(4.0); return x;
        case 6: x.setConstant(8.0); return x;
        case 7: x.setConstant(0.25); return x;
        default: {
            const double scales[] = {0.5, 1.0, 2.0, 5.0};
            const double sc = scales[rng.below(4)];
            for (int i = 0; i < n; ++i) {
                x[i] = sc * rng.uniform();
                if (rng.uniform() < 0.3) x[i] = 0.0;
            }
            return x;
        }
    }
}

StartOutcome run_start(const TcpInstance& inst, long k, const SearchBudget& budget) {
    const int n = inst.a.dim();
    Rng rng = Rng(budget.seed).spawn(static_cast<std::uint64_t>(k) + 9001);
    Eigen::VectorXd x = start_point(inst, k, rng);

    StartOutcome out;
    Eigen::VectorXd phi(n), da(n), db(n);
    auto merit_at = [&](const Eigen::VectorXd& xv) {
        std::vector<double> xs(xv.data(), xv.data() + n);
        const std::vector<double> f = f_value(inst, xs);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double p, d1, d2;
            fb(xv[i], f[static_cast<std::size_t>(i)], p, d1, d2);
            acc += 0.5 * p * p;
        }
        return acc;
    };

    double prev_merit = std::numeric_limits<double>::infinity();
    int nondecreasing = 0;
    std::vector<std::vector<double>> history;

    for (long it = 0; it < budget.max_iters; ++it) {
        ++out.iters;
        std::vector<double> xs(x.data(), x.data() + n);
        const std::vector<double> f = f_value(inst, xs);
        double merit = 0.0;
        for (int i = 0; i < n; ++i) {
            fb(x[i], f[static_cast<std::size_t>(i)], phi[i], da[i], db[i]);
            merit += 0.5 * phi[i] * phi[i];
        }
        if (!std::isfinite(merit)) break;
        if (phi.lpNorm<Eigen::Infinity>() <= 1e-11) break;

        // divergence bookkeeping: the monotone line search keeps the merit
        // strictly decreasing, so "stalled" means the decrease has flattened
        // out while the iterates keep growing
        const bool stalled =
            merit >= prev_merit - std::max(1e-15, 1e-3 * merit);
        nondecreasing = stalled ? nondecreasing + 1 : 0;
        prev_merit = merit;
        if (x.lpNorm<Eigen::Infinity>() > 1.0) {
            history.push_back(xs);
            if (history.size() > 64) history.erase(history.begin());
        }
        if (x.norm() > 1e6 && nondecreasing >= 20 && merit > 1e-10) {
            out.diverged = true;
            out.tail = std::move(history);
            return out;
        }

        const std::vector<double> jp = apply_jacobian(inst.a, xs);
        Eigen::MatrixXd J(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                J(i, j) = (i == j ? da[i] : 0.0) + db[i] * jp[static_cast<std::size_t>(i) * n + j];
        Eigen::VectorXd step = J.colPivHouseholderQr().solve(-phi);

        // keep steps proportionate so diverging runs grow geometrically and
        // stay finite long enough for the trace capture
        const double cap = 10.0 * (1.0 + x.norm());
        if (step.allFinite() && step.norm() > cap) step *= cap / step.norm();

        bool moved = false;
        if (step.allFinite()) {
            double alpha = 1.0;
            for (int halve = 0; halve < 40; ++halve) {
                Eigen::VectorXd xn = x + alpha * step;
                const double mn = merit_at(xn);
                if (std::isfinite(mn) && mn < merit) {
                    x = xn;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if (!moved) {
            // projected gradient on the squared merit
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    g[j] += phi[i] * ((i == j ? da[i] : 0.0) +
                                      db[i] * jp[static_cast<std::size_t>(i) * n + j]);
            double eta = 1.0;
            for (int halve = 0; halve < 40; ++halve) {
                Eigen::VectorXd xn = (x - eta * g).cwiseMax(0.0);
                const double mn = merit_at(xn);
                if (std::isfinite(mn) && mn < merit) {
                    x = xn;
                    moved = true;
                    break;
                }
                eta *= 0.5;
            }
        }
        if (!moved) break;
    }

    std::vector<double> xs(x.data(), x.data() + n);
    if (x.norm() > 1e6 && std::isfinite(merit_at(x)) && merit_at(x) > 1e-10 &&
        history.size() >= 2) {
        out.diverged = true;
        out.tail = history;
        return out;
    }
    const std::vector<double> f = f_value(inst, xs);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double p, d1, d2;
        fb(x[i], f[static_cast<std::size_t>(i)], p, d1, d2);
        worst = std::max(worst, std::abs(p));
    }
    if (worst > 1e-7) return out;

    std::vector<double> polished = active_set_polish(inst, xs, 1e-7);
    for (double& v : polished) v = std::max(v, 0.0);
    double feas, comp;
    residuals(inst, polished, feas, comp);
    if (feas <= budget.tol.tcp_residual && comp <= budget.tol.tcp_residual)
        out.solution = TcpSolution{std::move(polished), feas, comp, "multistart"};
    return out;
}

// least-squares multiplier for the exceptional-family equality on the support
std::optional<double> trace_multiplier(const Tensor& a, std::span<const double> q,
                                       std::span<const double> x) {
    const std::vector<double> p = tcpkit::apply(a, x);
    const double nrm = inf_norm(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 1e-9 * nrm) continue;
        const double fi = p[i] + (q.empty() ? 0.0 : q[i]);
        num -= fi * x[i];
        den += x[i] * x[i];
    }
    if (den == 0.0) return std::nullopt;
    const double mu = num / den;
    if (!(mu > 0.0)) return std::nullopt;
    return mu;
}

/// Checks the exceptional-family conditions of a trace. Throws on structural
/// defects; returns the largest scaled condition defect.
double check_trace(const DivergenceTrace& trace, const Tensor& a) {
    if (trace.points.empty()) throw std::invalid_argument("trace is empty");
    if (trace.multipliers.size() != trace.points.size())
        throw std::invalid_argument("trace multipliers do not match points");
    const int n = a.dim();
    if (!trace.q.empty() && static_cast<int>(trace.q.size()) != n)
        throw std::invalid_argument("trace shift dimension mismatch");
    double prev_norm = -1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < trace.points.size(); ++k) {
        const std::vector<double>& x = trace.points[k];
        if (static_cast<int>(x.size()) != n)
            throw std::invalid_argument("trace point dimension mismatch");
        const double mu = trace.multipliers[k];
        if (!(mu > 0.0)) throw std::invalid_argument("trace multipliers must be positive");
        const double nrm2 = two_norm(x);
        if (!(nrm2 > prev_norm))
            throw std::invalid_argument("trace norms must be strictly increasing");
        prev_norm = nrm2;
        const double nrm_inf = inf_norm(x);
        const std::vector<double> p = tcpkit::apply(a, x);
        double scale = 1.0;
        for (int e = 0; e < a.order() - 1; ++e) scale *= std::max(1.0, nrm2);
        for (int i = 0; i < n; ++i) {
            if (x[static_cast<std::size_t>(i)] < -1e-9 * std::max(1.0, nrm_inf))
                throw std::invalid_argument("trace points must be nonnegative");
            const double fi = p[static_cast<std::size_t>(i)] +
                              (trace.q.empty() ? 0.0 : trace.q[static_cast<std::size_t>(i)]);
            const double defect = x[static_cast<std::size_t>(i)] > 1e-9 * nrm_inf
                                      ? std::abs(fi + mu * x[static_cast<std::size_t>(i)])
                                      : std::max(0.0, -fi);
            worst = std::max(worst, defect / scale);
        }
    }
    return worst;
}

std::optional<DivergenceTrace> build_trace(const TcpInstance& inst,
                                           const std::vector<std::vector<double>>& tail) {
    DivergenceTrace trace;
    trace.q = inst.q;
    double prev = -1.0;
    for (const auto& x : tail) {
        const double nrm = two_norm(x);
        if (nrm <= prev * 1.05) continue;  // keep clearly growing points only
        auto mu = trace_multiplier(inst.a, inst.q, x);
        if (!mu) continue;
        trace.points.push_back(x);
        trace.multipliers.push_back(*mu);
        prev = nrm;
    }
    while (trace.points.size() > 8) {
        trace.points.erase(trace.points.begin());
        trace.multipliers.erase(trace.multipliers.begin());
    }
    if (trace.points.size() < 2) return std::nullopt;
    try {
        if (check_trace(trace, inst.a) > 1e-6) return std::nullopt;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    return trace;
}

}  // namespace

TcpInstance::TcpInstance(Tensor tensor, std::vector<double> shift)
    : a(std::move(tensor)), q(std::move(shift)) {
    if (static_cast<int>(q.size()) != a.dim())
        throw std::invalid_argument("q dimension must match the tensor");
    for (double v : q)
        if (!std::isfinite(v)) throw std::invalid_argument("q must be finite");
}

std::optional<TcpSolution> solve(const TcpInstance& inst, const SearchBudget& budget,
                                 SolveDiagnostics* diag) {
    budget.validate();
    const Deadline deadline = deadline_after_ms(budget.time_ms);

    std::optional<DivergenceTrace> divergence;
    long long iters = 0;
    std::function<std::optional<TcpSolution>(long)> one = [&](long k) {
        StartOutcome o = run_start(inst, k, budget);
        iters += o.iters;
        if (o.diverged && !divergence) divergence = build_trace(inst, o.tail);
        return o.solution;
    };
    auto sol = first_success<TcpSolution>(budget.max_starts, budget.threads, deadline, one);
    if (diag) {
        diag->budget_used.starts = budget.max_starts;
        diag->budget_used.iters = iters;
        if (!sol) diag->divergence = divergence;
    }
    return sol;
}

std::vector<TcpSolution> solve_all(const TcpInstance& inst, const SearchBudget& budget) {
    budget.validate();
    const Deadline deadline = deadline_after_ms(budget.time_ms);
    std::vector<TcpSolution> out;
    for (long k = 0; k < budget.max_starts; ++k) {
        if (k > 0 && expired(deadline)) break;
        StartOutcome o = run_start(inst, k, budget);
        if (o.solution) push_solution(out, std::move(*o.solution), budget.tol.dedup);
    }
    sort_solutions(out);
    return out;
}

namespace {

void enumerate_support(const TcpInstance& inst, const std::vector<int>& supp,
                       const SearchBudget& budget, std::vector<TcpSolution>& out) {
    const int n = inst.a.dim();
    const double tol = budget.tol.tcp_residual;
    const std::string method = "support-enumeration";

    auto try_point = [&](std::vector<double> x) {
        for (double& v : x) v = std::max(v, 0.0);
        x = active_set_polish(inst, std::move(x), 1e-9);
        double feas, comp;
        residuals(inst, x, feas, comp);
        if (feas <= tol && comp <= tol)
            push_solution(out, TcpSolution{std::move(x), feas, comp, method},
                          budget.tol.dedup);
    };

    if (supp.empty()) {
        std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
        double feas, comp;
        residuals(inst, zero, feas, comp);
        if (feas <= tol && comp <= tol)
            push_solution(out, TcpSolution{std::move(zero), feas, comp, method},
                          budget.tol.dedup);
        return;
    }

    if (supp.size() == 1) {
        const int i = supp[0];
        std::vector<int> idx(static_cast<std::size_t>(inst.a.order()), i + 1);
        const double head = inst.a.at(idx);
        const double qi = inst.q[static_cast<std::size_t>(i)];
        std::vector<double> c(static_cast<std::size_t>(inst.a.order()), 0.0);
        c[0] = qi;
        c[static_cast<std::size_t>(inst.a.order() - 1)] = head;
        const Polynomial poly{std::vector<double>(c)};
        if (poly.is_zero(1e-13)) {
            std::vector<double> x(static_cast<std::size_t>(n), 0.0);
            x[static_cast<std::size_t>(i)] = 1.0;  // one representative of the ray
            try_point(std::move(x));
            return;
        }
        for (double r : real_roots(poly, 1e-9, 1e9)) {
            std::vector<double> x(static_cast<std::size_t>(n), 0.0);
            x[static_cast<std::size_t>(i)] = r;
            try_point(std::move(x));
        }
        return;
    }

    if (supp.size() == 2) {
        const int i = supp[0], j = supp[1];
        const Tensor sub = principal_subtensor(inst.a, IndexSet({i + 1, j + 1}, n));
        std::vector<BiPoly> f = bivariate_components(sub);
        f[0][0] += Polynomial::constant(inst.q[static_cast<std::size_t>(i)]);
        f[1][0] += Polynomial::constant(inst.q[static_cast<std::size_t>(j)]);

        const Polynomial res = sylvester_resultant(f[0], f[1]);
        const double scale = std::max({1.0, inst.a.max_abs_entry(),
                                       inf_norm(inst.q)});
        std::vector<double> xi_candidates;
        if (res.is_zero(1e-10 * scale)) {
            // shared component: sample a few sections
            for (double v = 0.25; v <= 4.0; v *= 2.0) xi_candidates.push_back(v);
        } else {
            xi_candidates = real_roots(res, 1e-9, 1e9);
        }
        for (double xi : xi_candidates) {
            // instantiate f at x_i = xi and root-isolate in the second variable
            std::vector<double> coef;
            for (const Polynomial& cp : f[0]) coef.push_back(cp(xi));
            Polynomial f0_at(std::move(coef));
            std::vector<double> roots_y;
            if (f0_at.is_zero(1e-11 * scale)) {
                std::vector<double> coef2;
                for (const Polynomial& cp : f[1]) coef2.push_back(cp(xi));
                roots_y = real_roots(Polynomial(std::move(coef2)), 1e-9, 1e9);
            } else {
                roots_y = real_roots(f0_at, 1e-9, 1e9);
            }
            for (double yj : roots_y) {
                if (std::abs(bipoly_eval(f[1], xi, yj)) >
                    1e-5 * scale * std::max(1.0, std::pow(std::max(xi, yj),
                                                          inst.a.order() - 1)))
                    continue;
                std::vector<double> x(static_cast<std::size_t>(n), 0.0);
                x[static_cast<std::size_t>(i)] = xi;
                x[static_cast<std::size_t>(j)] = yj;
                try_point(std::move(x));
            }
        }
        return;
    }

    // three or more free coordinates: seeded Newton from a grid of starts
    Rng rng(budget.seed ^ 0xABCDEF);
    const double scales[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    for (long k = 0; k < std::max<long>(32, budget.max_starts); ++k) {
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (int idx : supp)
            x[static_cast<std::size_t>(idx)] =
                scales[rng.below(5)] * (0.2 + rng.uniform());
        try_point(std::move(x));
    }
}

}  // namespace

std::vector<TcpSolution> enumerate_solutions(const TcpInstance& inst,
                                             const SearchBudget& budget) {
    budget.validate();
    const int n = inst.a.dim();
    if (n > 3) {
        std::vector<TcpSolution> out = solve_all(inst, budget);
        for (TcpSolution& s : out) s.method = "multistart";
        return out;
    }
    std::vector<TcpSolution> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> supp;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) supp.push_back(i);
        enumerate_support(inst, supp, budget, out);
    }
    sort_solutions(out);
    return out;
}

BoundednessReport boundedness_report(const TcpInstance& inst, const SearchBudget& budget) {
    budget.validate();
    BoundednessReport rep;
    rep.r0 = classify(inst.a, ClassId::R0, budget);
    const std::vector<TcpSolution> sols = enumerate_solutions(inst, budget);
    rep.solution_count = sols.size();
    if (!sols.empty()) {
        double mx = 0.0;
        for (const TcpSolution& s : sols) mx = std::max(mx, inf_norm(s.x));
        rep.max_solution_norm = mx;
    }
    switch (rep.r0.status) {
        case VerdictStatus::Member:
            rep.bounded_certified = true;
            rep.conclusion =
                "R0: Member - the homogeneous recession system has no nonzero "
                "nonnegative solution, so the solution set is bounded for every q.";
            break;
        case VerdictStatus::NonMember:
            rep.conclusion =
                "R0: NonMember - the attached recession witness solves the "
                "homogeneous system and marks a potential unbounded direction.";
            rep.recession_witness = rep.r0.witness;
            break;
        case VerdictStatus::Unknown:
            rep.conclusion = "R0 verdict unknown under budget; boundedness not certified.";
            break;
    }
    return rep;
}

std::optional<Witness> extract_er_witness(const DivergenceTrace& trace, const Tensor& a) {
    const double defect = check_trace(trace, a);  // throws on structural defects
    if (defect > 1e-6)
        throw std::invalid_argument("trace violates the exceptional-family conditions");

    const int n = a.dim();
    const int m = a.order();
    const std::size_t cnt = trace.points.size();
    const std::size_t take = std::min<std::size_t>(3, cnt);

    // Euclidean-normalized average of the newest points, then rescaled onto
    // the max-norm slice together with t (the pair transforms as a unit).
    std::vector<double> xhat(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = cnt - take; k < cnt; ++k) {
        const double nrm = two_norm(trace.points[k]);
        for (int i = 0; i < n; ++i)
            xhat[static_cast<std::size_t>(i)] += trace.points[k][static_cast<std::size_t>(i)] / nrm;
    }
    const double xn2 = two_norm(xhat);
    if (xn2 == 0.0) return std::nullopt;
    for (double& v : xhat) v /= xn2;
    for (double& v : xhat) {
        if (std::abs(v) <= 1e-9) v = 0.0;
        if (v < 0.0) return std::nullopt;
    }

    const double last_norm = two_norm(trace.points.back());
    double tstar = trace.multipliers.back();
    for (int e = 0; e < m - 2; ++e) tstar /= last_norm;

    const double alpha = 1.0 / inf_norm(xhat);
    const ScaledPoint sp = scale_point(xhat, tstar, alpha, m, WitnessScaling::er);

    const double res = witness_residual(a, ClassId::ER, sp.x, sp.t);
    if (!(res <= 1e-6)) return std::nullopt;
    return Witness{sp.x, sp.t, res, ClassId::ER};
}

}  // namespace tcpkit
