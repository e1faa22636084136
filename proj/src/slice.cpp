#include "tcpkit/slice.hpp"

#include <stdexcept>

namespace tcpkit {

std::vector<Polynomial> restrict_to_line(const Tensor& a,
                                         std::span<const double> base,
                                         std::span<const double> dir) {
    const int n = a.dim();
    const int m = a.order();
    if (static_cast<int>(base.size()) != n || static_cast<int>(dir.size()) != n)
        throw std::invalid_argument("restrict_to_line: dimension mismatch");

    std::size_t block = 1;
    for (int k = 1; k < m; ++k) block *= static_cast<std::size_t>(n);
    const std::vector<double>& c = a.coeffs();

    std::vector<Polynomial> out(static_cast<std::size_t>(n));
    std::vector<int> digit(static_cast<std::size_t>(m - 1));
    for (std::size_t o = 0; o < block; ++o) {
        std::size_t rem = o;
        for (int k = m - 2; k >= 0; --k) {
            digit[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        Polynomial term = Polynomial::constant(1.0);
        bool zero = false;
        for (int k = 0; k < m - 1 && !zero; ++k) {
            const int d = digit[static_cast<std::size_t>(k)];
            if (base[d] == 0.0 && dir[d] == 0.0) zero = true;
            else term = term * Polynomial({base[d], dir[d]});
        }
        if (zero) continue;
        for (int i = 0; i < n; ++i) {
            const double coef = c[static_cast<std::size_t>(i) * block + o];
            if (coef != 0.0) out[static_cast<std::size_t>(i)] += term * coef;
        }
    }
    return out;
}

std::vector<BiPoly> bivariate_components(const Tensor& a) {
    if (a.dim() != 2)
        throw std::invalid_argument("bivariate_components requires a 2-dimensional tensor");
    const int m = a.order();
    std::size_t block = 1;
    for (int k = 1; k < m; ++k) block *= 2;
    const std::vector<double>& c = a.coeffs();

    std::vector<BiPoly> out(2, BiPoly(static_cast<std::size_t>(m)));
    for (std::size_t o = 0; o < block; ++o) {
        int pow_x2 = 0;
        std::size_t rem = o;
        for (int k = 0; k < m - 1; ++k) {
            pow_x2 += static_cast<int>(rem & 1u);
            rem >>= 1;
        }
        const int pow_x1 = m - 1 - pow_x2;
        for (int i = 0; i < 2; ++i) {
            const double coef = c[static_cast<std::size_t>(i) * block + o];
            if (coef == 0.0) continue;
            std::vector<double> mono(static_cast<std::size_t>(pow_x1) + 1, 0.0);
            mono.back() = coef;
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(pow_x2)] +=
                Polynomial(std::move(mono));
        }
    }
    return out;
}

}  // namespace tcpkit
