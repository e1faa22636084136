#pragma once

#include <cstdint>
#include <stdexcept>

namespace tcpkit {

/// Numeric thresholds shared across the searches. Values can be overridden
/// from the CLI (--tol KEY=VAL); overrides must lie in [1e-14, 1e-2].
struct Tolerances {
    double witness_residual = 1e-8;   // equality defect accepted for a witness
    double strict_margin = 1e-8;      // "> 0" means > strict_margin
    double tcp_residual = 1e-8;       // feasibility/complementarity defect
    double eig_residual = 1e-9;       // eigenpair defect
    double dedup = 1e-6;              // distance under which results collapse
    double snap = 1e-9;               // components below this are treated as zero

    void validate_override(double v) const {
        if (!(v >= 1e-14 && v <= 1e-2))
            throw std::invalid_argument("tolerance override outside [1e-14, 1e-2]");
    }
};

/// Budget for iterative searches. All randomness used anywhere flows from
/// `seed`; identical (inputs, budget) produce identical results.
struct SearchBudget {
    long max_starts = 64;
    long max_iters = 200;
    long time_ms = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    Tolerances tol{};

    void validate() const {
        if (max_starts <= 0 || max_iters <= 0 || time_ms <= 0)
            throw std::invalid_argument("budget fields must be positive");
        if (threads <= 0)
            throw std::invalid_argument("threads must be positive");
    }
};

struct BudgetUsed {
    long long starts = 0;
    long long iters = 0;
};

}  // namespace tcpkit
