#pragma once

#include <string>
#include <vector>

#include "tcpkit/budget.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

enum class EigKind { H, Z };

std::string to_string(EigKind k);

/// An eigenpair with its max-norm defect of the defining equation.
/// Z-eigenvectors satisfy ||x||_2 = 1; H-eigenvectors are normalized to
/// ||x||_inf = 1 with the first nonzero component positive.
struct EigenPair {
    EigKind kind = EigKind::Z;
    double lambda = 0.0;
    std::vector<double> x;
    double residual = 0.0;
};

/// Defect of the defining equation, recomputed from apply().
double eig_residual(const Tensor& a, const EigenPair& pair);

/// All Z-eigenpairs found under the budget. For dim 2 the search sweeps the
/// full angle parameterization of the unit circle (dense grid plus damped
/// Newton polish), so every real pair is found up to grid resolution; for
/// larger dimensions the search is multistart and best-effort.
std::vector<EigenPair> z_eigenpairs(const Tensor& a, const SearchBudget& budget);

/// All H-eigenpairs found under the budget; exhaustive slice sweep for
/// dim 2, multistart from sign patterns and box corners otherwise.
std::vector<EigenPair> h_eigenpairs(const Tensor& a, const SearchBudget& budget);

}  // namespace tcpkit
