#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lvfem/sparse.hpp"

namespace lvfem {

enum class SolverMethod { Iterative, Direct };

std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& s);

struct SolverConfig {
    double rel_tol = 1e-10;
    int max_iters = 5000;
    SolverMethod method = SolverMethod::Iterative;

    /// Throws ConfigError when rel_tol <= 0 or max_iters < 1.
    void validate() const;
};

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    /// ||A x - rhs||_2 recomputed after the solve.
    double residual_norm = 0.0;
};

/// Solves A x = rhs for symmetric, possibly indefinite A.
///
/// The iterative path is MINRES with |diag(A)| as the (SPD) preconditioner;
/// the direct path is a sparse LU factorisation. Either way the result
/// satisfies ||A x - rhs|| <= rel_tol ||rhs||, otherwise SolverError is
/// thrown carrying the final residual.
SolveResult solve_linear(const SparseMatrix& a, std::span<const double> rhs, const SolverConfig& cfg,
                         std::optional<std::span<const double>> initial_guess = std::nullopt);

/// ||A x - b||_2.
double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

} // namespace lvfem
