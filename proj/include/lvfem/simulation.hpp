#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lvfem/config.hpp"
#include "lvfem/error.hpp"
#include "lvfem/output.hpp"
#include "lvfem/stepper.hpp"

namespace lvfem {

struct RunOptions {
    /// Write snapshots and diagnostics.csv under cfg.output.directory.
    bool write_files = true;
    /// Replaces the configured initial condition when set.
    std::optional<SpeciesFields> initial_override;
    StepOptions step;
    /// Called after every step (including t = 0) with the current state.
    std::function<void(const SpeciesState&, const Diagnostics&)> on_step;
};

struct SimulationResult {
    std::vector<Snapshot> snapshots;
    std::vector<Diagnostics> diagnostics;
    SpeciesState final_state;
};

/// Error raised when a step fails; carries the step that failed. Outputs
/// written before the failure are left in place.
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, std::int64_t failed_step)
        : Error("simulation", what), failed_step_(failed_step) {}
    std::int64_t failed_step() const noexcept { return failed_step_; }

private:
    std::int64_t failed_step_;
};

/// Step index used for a requested snapshot time: the last step that does
/// not pass it.
std::int64_t snapshot_step(double t_requested, double dt);

SimulationResult run_simulation(const SimConfig& cfg, const RunOptions& options = {});

struct ConvergenceRow {
    double dt = 0.0;
    /// M-weighted distance to the finest run at t_end (0 for the finest).
    double error_vs_finest = 0.0;
    /// Distance to the next finer run.
    double successive_difference = 0.0;
    /// log(d_k / d_{k+1}) / log(dt_k / dt_{k+1}); NaN where undefined.
    double observed_order = 0.0;
};

/// Runs the base configuration at each time step in `dts` (strictly
/// decreasing, at least three, each dividing t_end) and estimates the
/// temporal order from successive differences.
std::vector<ConvergenceRow> convergence_study(const SimConfig& base, const std::vector<double>& dts,
                                              const StepOptions& step_options = {});

/// sqrt(sum_i (a_i - b_i)^T M (a_i - b_i)).
double mass_norm_distance(const SpeciesFields& a, const SpeciesFields& b, const SparseMatrix& mass);

} // namespace lvfem
