#include "tcpkit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcpkit {

namespace {

std::size_t pow_size(int base, int exp) {
    std::size_t r = 1;
    for (int k = 0; k < exp; ++k) {
        if (r > (std::size_t(1) << 40) / static_cast<std::size_t>(base))
            throw std::invalid_argument("tensor too large for dense storage");
        r *= static_cast<std::size_t>(base);
    }
    return r;
}

void check_vector(std::span<const double> x, int dim, const char* what) {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": non-finite input");
}

}  // namespace

Tensor::Tensor(int order, int dim, std::vector<double> coeffs)
    : order_(order), dim_(dim), coeffs_(std::move(coeffs)) {
    if (order_ < 2) throw std::invalid_argument("tensor order must be >= 2");
    if (dim_ < 1) throw std::invalid_argument("tensor dimension must be >= 1");
    if (coeffs_.size() != pow_size(dim_, order_))
        throw std::invalid_argument("coefficient array length must equal dim^order");
    for (double v : coeffs_)
        if (!std::isfinite(v))
            throw std::invalid_argument("tensor coefficients must be finite");
}

Tensor Tensor::zeros(int order, int dim) {
    return Tensor(order, dim, std::vector<double>(pow_size(dim, order), 0.0));
}

Tensor Tensor::constant(int order, int dim, double value) {
    return Tensor(order, dim, std::vector<double>(pow_size(dim, order), value));
}

Tensor Tensor::diagonal(int order, std::span<const double> diag) {
    const int n = static_cast<int>(diag.size());
    Tensor t = zeros(order, n);
    std::vector<int> idx(order);
    for (int i = 1; i <= n; ++i) {
        std::fill(idx.begin(), idx.end(), i);
        t.set(idx, diag[i - 1]);
    }
    return t;
}

std::size_t Tensor::flat(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != order_)
        throw std::invalid_argument("multi-index length must equal tensor order");
    std::size_t f = 0;
    for (int k = 0; k < order_; ++k) {
        const int i = index[k];
        if (i < 1 || i > dim_)
            throw std::invalid_argument("multi-index entry out of range");
        f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i - 1);
    }
    return f;
}

double Tensor::at(std::span<const int> index) const { return coeffs_[flat(index)]; }

void Tensor::set(std::span<const int> index, double value) {
    if (!std::isfinite(value))
        throw std::invalid_argument("tensor coefficients must be finite");
    coeffs_[flat(index)] = value;
}

double Tensor::min_entry() const {
    return *std::min_element(coeffs_.begin(), coeffs_.end());
}

double Tensor::max_abs_entry() const {
    double m = 0.0;
    for (double v : coeffs_) m = std::max(m, std::abs(v));
    return m;
}

Tensor Tensor::operator+(const Tensor& other) const {
    if (order_ != other.order_ || dim_ != other.dim_)
        throw std::invalid_argument("tensor shape mismatch in addition");
    std::vector<double> c(coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coeffs_[i];
    return Tensor(order_, dim_, std::move(c));
}

Tensor Tensor::operator*(double scalar) const {
    std::vector<double> c(coeffs_);
    for (double& v : c) v *= scalar;
    return Tensor(order_, dim_, std::move(c));
}

IndexSet::IndexSet(std::vector<int> indices, int dim)
    : indices_(std::move(indices)), dim_(dim) {
    if (indices_.empty()) throw std::invalid_argument("index set must be nonempty");
    int prev = 0;
    for (int i : indices_) {
        if (i <= prev)
            throw std::invalid_argument("index set must be strictly increasing");
        if (i < 1 || i > dim_)
            throw std::invalid_argument("index set entry out of range");
        prev = i;
    }
}

std::vector<double> apply(const Tensor& a, std::span<const double> x) {
    check_vector(x, a.dim(), "apply");
    const int n = a.dim();
    const int m = a.order();
    std::size_t block = 1;
    for (int k = 1; k < m; ++k) block *= static_cast<std::size_t>(n);

    // Product of x over the trailing m-1 index digits, computed once per
    // offset and shared by every output row.
    std::vector<double> prod(block);
    for (std::size_t o = 0; o < block; ++o) {
        double p = 1.0;
        std::size_t rem = o;
        std::size_t scale = block / static_cast<std::size_t>(n);
        for (int k = 1; k < m; ++k) {
            p *= x[rem / scale];
            rem %= scale;
            if (k + 1 < m) scale /= static_cast<std::size_t>(n);
        }
        prod[o] = p;
    }

    const std::vector<double>& c = a.coeffs();
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * block;
        double acc = 0.0;
        for (std::size_t o = 0; o < block; ++o) acc += c[base + o] * prod[o];
        out[i] = acc;
    }
    return out;
}

double form(const Tensor& a, std::span<const double> x) {
    const std::vector<double> ax = apply(a, x);
    double acc = 0.0;
    for (int i = 0; i < a.dim(); ++i) acc += x[i] * ax[i];
    return acc;
}

std::vector<double> apply_jacobian(const Tensor& a, std::span<const double> x) {
    check_vector(x, a.dim(), "apply_jacobian");
    const int n = a.dim();
    const int m = a.order();
    std::size_t block = 1;
    for (int k = 1; k < m; ++k) block *= static_cast<std::size_t>(n);

    const std::vector<double>& c = a.coeffs();
    std::vector<double> jac(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<int> digit(m - 1);
    for (std::size_t o = 0; o < block; ++o) {
        std::size_t rem = o;
        for (int k = m - 2; k >= 0; --k) {
            digit[k] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        for (int i = 0; i < n; ++i) {
            const double coef = c[static_cast<std::size_t>(i) * block + o];
            if (coef == 0.0) continue;
            for (int k = 0; k < m - 1; ++k) {
                double partial = coef;
                for (int l = 0; l < m - 1; ++l)
                    if (l != k) partial *= x[digit[l]];
                jac[static_cast<std::size_t>(i) * n + digit[k]] += partial;
            }
        }
    }
    return jac;
}

Tensor principal_subtensor(const Tensor& a, const IndexSet& j) {
    if (j.dim() != a.dim())
        throw std::invalid_argument("index set was built for a different dimension");
    const int m = a.order();
    const int r = j.size();
    Tensor sub = Tensor::zeros(m, r);
    std::vector<int> sub_idx(m, 1), full_idx(m);
    for (;;) {
        for (int k = 0; k < m; ++k) full_idx[k] = j.indices()[sub_idx[k] - 1];
        sub.set(sub_idx, a.at(full_idx));
        int k = m - 1;
        while (k >= 0 && sub_idx[k] == r) sub_idx[k--] = 1;
        if (k < 0) break;
        ++sub_idx[k];
    }
    return sub;
}

ScaledPoint scale_point(std::span<const double> x, double t, double alpha,
                        int order, WitnessScaling system) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    const int exponent = system == WitnessScaling::er ? order - 2 : order - 1;
    ScaledPoint out;
    out.x.assign(x.begin(), x.end());
    for (double& v : out.x) v *= alpha;
    out.t = t * std::pow(alpha, exponent);
    return out;
}

}  // namespace tcpkit
