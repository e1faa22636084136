#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "tcpkit/rng.hpp"
#include "tcpkit/tensor.hpp"

namespace testsupport {

inline tcpkit::Tensor from_entries(int order, int dim,
                                   const std::map<std::vector<int>, double>& entries) {
    tcpkit::Tensor t = tcpkit::Tensor::zeros(order, dim);
    for (const auto& [idx, v] : entries) t.set(idx, v);
    return t;
}

// a111=-16, a122=1, a211=-17, a222=1
inline tcpkit::Tensor example31() {
    return from_entries(3, 2,
                        {{{1, 1, 1}, -16.0}, {{1, 2, 2}, 1.0}, {{2, 1, 1}, -17.0}, {{2, 2, 2}, 1.0}});
}

// a111=1, a122=-1, a211=2, a222=-1
inline tcpkit::Tensor example32() {
    return from_entries(3, 2,
                        {{{1, 1, 1}, 1.0}, {{1, 2, 2}, -1.0}, {{2, 1, 1}, 2.0}, {{2, 2, 2}, -1.0}});
}

inline tcpkit::Tensor random_tensor(int order, int dim, tcpkit::Rng& rng, double lo = -2.0,
                                    double hi = 2.0) {
    std::size_t len = 1;
    for (int k = 0; k < order; ++k) len *= static_cast<std::size_t>(dim);
    std::vector<double> c(len);
    for (double& v : c) v = rng.uniform(lo, hi);
    return tcpkit::Tensor(order, dim, std::move(c));
}

// nonnegative entries with a boosted diagonal; strictly semi-positive by
// construction (the max component certifies)
inline tcpkit::Tensor random_nonneg_posdiag(int order, int dim, tcpkit::Rng& rng) {
    tcpkit::Tensor t = random_tensor(order, dim, rng, 0.0, 2.0);
    std::vector<int> idx(static_cast<std::size_t>(order));
    for (int i = 1; i <= dim; ++i) {
        std::fill(idx.begin(), idx.end(), i);
        t.set(idx, t.at(idx) + 0.5);
    }
    return t;
}

// strictly diagonally dominant with positive diagonal: for the max-abs
// component i the diagonal term beats everything else, so
// x_i^{m-1} (Ax^{m-1})_i > 0 for every nonzero x
inline tcpkit::Tensor random_diag_dominant(int order, int dim, tcpkit::Rng& rng) {
    tcpkit::Tensor t = random_tensor(order, dim, rng, -0.1, 0.1);
    std::size_t block = 1;
    for (int k = 1; k < order; ++k) block *= static_cast<std::size_t>(dim);
    std::vector<int> idx(static_cast<std::size_t>(order));
    for (int i = 1; i <= dim; ++i) {
        std::fill(idx.begin(), idx.end(), i);
        t.set(idx, 0.0);
        double offsum = 0.0;
        for (std::size_t o = 0; o < block; ++o)
            offsum += std::abs(t.coeffs()[static_cast<std::size_t>(i - 1) * block + o]);
        t.set(idx, offsum + rng.uniform(0.5, 1.5));
    }
    return t;
}

// independent route: direct summation over the full multi-index via at()
inline std::vector<double> apply_naive(const tcpkit::Tensor& a, const std::vector<double>& x) {
    const int n = a.dim();
    const int m = a.order();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(m), 1);
    for (;;) {
        double prod = a.at(idx);
        for (int k = 1; k < m; ++k) prod *= x[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)] - 1)];
        out[static_cast<std::size_t>(idx[0] - 1)] += prod;
        int k = m - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == n) {
            idx[static_cast<std::size_t>(k)] = 1;
            --k;
        }
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
    }
    return out;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double u : v) m = std::max(m, std::abs(u));
    return m;
}

inline bool is_nonneg(const std::vector<double>& v, double tol = 1e-10) {
    for (double u : v)
        if (u < -tol) return false;
    return true;
}

inline bool is_nonpos(const std::vector<double>& v, double tol = 1e-10) {
    for (double u : v)
        if (u > tol) return false;
    return true;
}

}  // namespace testsupport
