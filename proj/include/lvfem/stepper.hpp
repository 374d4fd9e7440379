#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "lvfem/assembly.hpp"
#include "lvfem/linalg.hpp"
#include "lvfem/mesh.hpp"
#include "lvfem/model.hpp"
#include "lvfem/sparse.hpp"

namespace lvfem {

/// Mesh plus the time-independent matrices of the semi-discrete system.
struct Discretization {
    Mesh mesh;
    std::shared_ptr<const SparsityPattern> pattern;
    SparseMatrix mass;
    SparseMatrix stiffness;

    /// Assembles M and K; with `lumped` the mass matrix is replaced by its
    /// row-sum diagonal.
    static Discretization build(Mesh mesh, bool lumped = false);
};

/// Solution at two consecutive time levels, as needed by the two-step scheme.
struct SpeciesState {
    SpeciesFields u_prev;
    SpeciesFields u_curr;
    double t0 = 0.0;
    double t = 0.0;
    std::int64_t step_index = 0;

    /// Start state with u_prev := u_curr := initial (first-order start).
    static SpeciesState bootstrap(SpeciesFields initial, double t0 = 0.0);
};

struct StepOptions {
    /// When false the reaction matrices are dropped (pure diffusion).
    bool growth = true;
    /// Use species-1 diffusivity in every stage instead of eps_i.
    bool paper_literal_stages = false;
};

/// Adams-Bashforth extrapolation -1/2 u_prev + 3/2 u_curr.
NodalField extrapolate_tilde(std::span<const double> u_prev, std::span<const double> u_curr);

/// Crank-Nicolson average 1/2 (u_n + u_{n+1}).
NodalField half_step_average(std::span<const double> u_n, std::span<const double> u_next);

/// Solves (M + dt/2 eps K - dt/2 B) u_next = (M - dt/2 eps K + dt/2 B) u_curr
/// with u_curr as the initial guess.
NodalField stage_solve(const SparseMatrix& mass, const SparseMatrix& stiffness, const SparseMatrix& reaction,
                       std::span<const double> u_curr, double eps, double dt, const SolverConfig& cfg);

/// Per-stage data kept for inspection by tests and diagnostics.
struct StepTrace {
    SpeciesFields tilde;
    SpeciesFields hat;
    std::array<int, 3> iterations{};
};

/// Advances one step with the staggered three-stage scheme. Stage i freezes
/// the growth factor f_i at the half-step averages of the species already
/// updated this step and the extrapolations of the others. The input state
/// is never modified; failures propagate as SolverError tagged with the stage.
SpeciesState step(const SpeciesState& state, const Discretization& disc, const ModelParams& params, double dt,
                  const SolverConfig& cfg, const StepOptions& options = {}, StepTrace* trace = nullptr);

} // namespace lvfem
