#pragma once

#include <span>
#include <vector>

#include "tcpkit/polynomial.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// Components of apply(A, base + s*dir) as univariate polynomials in s.
std::vector<Polynomial> restrict_to_line(const Tensor& a,
                                         std::span<const double> base,
                                         std::span<const double> dir);

/// For a 2-dimensional tensor, the components of apply(A, (x1, x2)) as
/// bivariate polynomials (coefficients in x2, entries polynomials in x1).
std::vector<BiPoly> bivariate_components(const Tensor& a);

}  // namespace tcpkit
