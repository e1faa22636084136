#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcpkit/budget.hpp"
#include "tcpkit/classes.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// The complementarity problem: find x >= 0 with f(x) = A x^{m-1} + q >= 0
/// and x^T f(x) = 0.
struct TcpInstance {
    Tensor a;
    std::vector<double> q;

    TcpInstance(Tensor tensor, std::vector<double> shift);
};

struct TcpSolution {
    std::vector<double> x;
    double feas_residual = 0.0;  // max(0, -min x_i, -min f_i)
    double comp_residual = 0.0;  // |x^T f(x)|
    std::string method;
};

/// A finite proxy for an exceptional family of elements: nonnegative points
/// with strictly increasing norms whose multipliers satisfy
/// f_i(x^k) = -mu_k x_i^k on the support and f_i(x^k) >= 0 off it (within a
/// tolerance that scales with the homogeneity degree). `q` is the shift the
/// conditions were checked against (empty means zero).
struct DivergenceTrace {
    std::vector<std::vector<double>> points;
    std::vector<double> multipliers;
    std::vector<double> q;
};

struct SolveDiagnostics {
    std::optional<DivergenceTrace> divergence;
    BudgetUsed budget_used;
};

/// Multistart damped semismooth Newton on the componentwise reformulation
/// phi(x_i, f_i(x)) = 0 with phi(a,b) = sqrt(a^2+b^2) - a - b, plus a
/// projected-descent fallback on the squared merit. Non-convergence is a
/// value (nullopt), not an error.
std::optional<TcpSolution> solve(const TcpInstance& inst, const SearchBudget& budget,
                                 SolveDiagnostics* diag = nullptr);

/// Every distinct solution the multistart solver converges to.
std::vector<TcpSolution> solve_all(const TcpInstance& inst, const SearchBudget& budget);

/// Support-pattern enumeration. Exhaustive for dim <= 3 (real-root isolation
/// on the one- and two-variable support systems); multistart best effort
/// beyond that, with the method field downgraded accordingly.
std::vector<TcpSolution> enumerate_solutions(const TcpInstance& inst,
                                             const SearchBudget& budget);

struct BoundednessReport {
    Verdict r0;
    std::optional<double> max_solution_norm;  // max-norm over enumerated solutions
    std::size_t solution_count = 0;
    bool bounded_certified = false;
    std::string conclusion;
    std::optional<Witness> recession_witness;
};

BoundednessReport boundedness_report(const TcpInstance& inst, const SearchBudget& budget);

/// Normalized limit of an exceptional-family proxy: returns a witness for
/// the t-weighted failure system when its residual is at most 1e-6.
std::optional<Witness> extract_er_witness(const DivergenceTrace& trace, const Tensor& a);

}  // namespace tcpkit
