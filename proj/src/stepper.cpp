#include "lvfem/stepper.hpp"

#include <string>

#include "lvfem/error.hpp"

namespace lvfem {

Discretization Discretization::build(Mesh mesh, bool lumped) {
    Discretization d{std::move(mesh), nullptr, {}, {}};
    d.pattern = build_pattern(d.mesh);
    d.mass = assemble_mass(d.mesh, d.pattern);
    if (lumped) {
        d.mass = lump_mass(d.mass);
    }
    d.stiffness = assemble_stiffness(d.mesh, d.pattern);
    return d;
}

SpeciesState SpeciesState::bootstrap(SpeciesFields initial, double t0) {
    SpeciesState s;
    s.u_prev = initial;
    s.u_curr = std::move(initial);
    s.t0 = t0;
    s.t = t0;
    return s;
}

NodalField extrapolate_tilde(std::span<const double> u_prev, std::span<const double> u_curr) {
    if (u_prev.size() != u_curr.size()) {
        throw DimensionError("extrapolate_tilde: length mismatch");
    }
    NodalField out(u_curr.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = -0.5 * u_prev[k] + 1.5 * u_curr[k];
    }
    return out;
}

NodalField half_step_average(std::span<const double> u_n, std::span<const double> u_next) {
    if (u_n.size() != u_next.size()) {
        throw DimensionError("half_step_average: length mismatch");
    }
    NodalField out(u_n.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = 0.5 * (u_n[k] + u_next[k]);
    }
    return out;
}

namespace {

SolveResult solve_stage_system(const SparseMatrix& mass, const SparseMatrix& stiffness, const SparseMatrix& reaction,
                               std::span<const double> u_curr, double eps, double dt, const SolverConfig& cfg) {
    const double h = 0.5 * dt;
    // Operator of the semi-discrete equation: -eps K + B.
    const SparseMatrix op = linear_combination(-eps, stiffness, 1.0, reaction);
    const SparseMatrix lhs = linear_combination(1.0, mass, -h, op);
    const SparseMatrix rhs_mat = linear_combination(1.0, mass, h, op);
    const std::vector<double> rhs = spmv(rhs_mat, u_curr);
    return solve_linear(lhs, rhs, cfg, u_curr);
}

} // namespace

NodalField stage_solve(const SparseMatrix& mass, const SparseMatrix& stiffness, const SparseMatrix& reaction,
                       std::span<const double> u_curr, double eps, double dt, const SolverConfig& cfg) {
    return solve_stage_system(mass, stiffness, reaction, u_curr, eps, dt, cfg).x;
}

SpeciesState step(const SpeciesState& state, const Discretization& disc, const ModelParams& params, double dt,
                  const SolverConfig& cfg, const StepOptions& options, StepTrace* trace) {
    const Mesh& mesh = disc.mesh;
    for (const auto* fields : {&state.u_prev, &state.u_curr}) {
        for (const auto& f : *fields) {
            if (f.size() != mesh.num_nodes()) {
                throw DimensionError("state field length does not match the mesh");
            }
        }
    }

    SpeciesFields tilde;
    for (std::size_t i = 0; i < 3; ++i) {
        tilde[i] = extrapolate_tilde(state.u_prev[i], state.u_curr[i]);
    }

    // Growth arguments start as the extrapolations; each finished stage
    // swaps in its half-step average for the stages that follow.
    SpeciesFields args = tilde;
    SpeciesFields next;
    SpeciesFields hat;
    std::array<int, 3> iterations{};
    const SparseMatrix zero(disc.pattern);

    for (int species = 1; species <= 3; ++species) {
        const std::size_t i = static_cast<std::size_t>(species - 1);
        const double eps = options.paper_literal_stages ? 1.0 : params.diffusivity(species);
        const SparseMatrix reaction = options.growth
                                          ? assemble_weighted_mass(mesh, args, species, params, disc.pattern)
                                          : zero;
        try {
            SolveResult solved = solve_stage_system(disc.mass, disc.stiffness, reaction, state.u_curr[i], eps, dt, cfg);
            iterations[i] = solved.iterations;
            next[i] = std::move(solved.x);
        } catch (const SolverError& e) {
            throw SolverError("stage " + std::to_string(species) + " at t=" + std::to_string(state.t + dt) + ": " +
                                  e.what(),
                              e.final_residual(), e.iterations());
        }
        hat[i] = half_step_average(state.u_curr[i], next[i]);
        args[i] = hat[i];
    }

    if (trace != nullptr) {
        trace->tilde = std::move(tilde);
        trace->hat = std::move(hat);
        trace->iterations = iterations;
    }

    SpeciesState out;
    out.u_prev = state.u_curr;
    out.u_curr = std::move(next);
    out.t0 = state.t0;
    out.step_index = state.step_index + 1;
    out.t = state.t0 + static_cast<double>(out.step_index) * dt;
    return out;
}

} // namespace lvfem
