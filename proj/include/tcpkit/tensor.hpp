#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tcpkit {

/// Dense real tensor of order m and dimension n. Coefficients are stored in
/// a flat array of length n^m, row-major over the 1-based multi-index
/// (i1,...,im). Values are immutable for the purposes of the analysis
/// routines: apply/form/... are pure and safe to call concurrently.
class Tensor {
public:
    Tensor(int order, int dim, std::vector<double> coeffs);

    static Tensor zeros(int order, int dim);
    static Tensor constant(int order, int dim, double value);
    /// Tensor with a_{ii...i} = diag[i] and every other entry zero.
    static Tensor diagonal(int order, std::span<const double> diag);

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Entry access by 1-based multi-index of length order().
    double at(std::span<const int> index) const;
    void set(std::span<const int> index, double value);

    double min_entry() const;
    double max_abs_entry() const;

    Tensor operator+(const Tensor& other) const;
    Tensor operator*(double scalar) const;

private:
    std::size_t flat(std::span<const int> index) const;

    int order_;
    int dim_;
    std::vector<double> coeffs_;
};

/// Strictly increasing, duplicate-free subset of {1,...,n}.
class IndexSet {
public:
    IndexSet(std::vector<int> indices, int dim);

    const std::vector<int>& indices() const noexcept { return indices_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    int dim() const noexcept { return dim_; }

private:
    std::vector<int> indices_;
    int dim_;
};

/// The tensor-vector product: out_i = sum over (i2..im) of
/// a_{i i2...im} x_{i2}...x_{im}. Summation runs in fixed lexicographic
/// order over (i2,...,im) so results are bit-reproducible.
std::vector<double> apply(const Tensor& a, std::span<const double> x);

/// The homogeneous degree-m form x^T (A x^{m-1}).
double form(const Tensor& a, std::span<const double> x);

/// Jacobian of apply at x, row-major n*n.
std::vector<double> apply_jacobian(const Tensor& a, std::span<const double> x);

/// Restriction of A to multi-indices drawn entirely from J.
Tensor principal_subtensor(const Tensor& a, const IndexSet& j);

/// Which witness system a scaled point should stay a solution of. The
/// equality branch of the t-weighted system scales like alpha^{m-2}, the
/// constant-shift system like alpha^{m-1}.
enum class WitnessScaling { er, r };

struct ScaledPoint {
    std::vector<double> x;
    double t;
};

/// Maps (x, t) -> (alpha*x, alpha^k * t) with k = m-2 (er) or m-1 (r),
/// preserving solution status of the corresponding witness system.
ScaledPoint scale_point(std::span<const double> x, double t, double alpha,
                        int order, WitnessScaling system);

}  // namespace tcpkit
