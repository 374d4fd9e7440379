#include "lvfem/simulation.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "lvfem/error.hpp"
#include "lvfem/initial_conditions.hpp"

namespace lvfem {

std::int64_t snapshot_step(double t_requested, double dt) {
    return static_cast<std::int64_t>(std::floor(t_requested / dt + 1e-9));
}

SimulationResult run_simulation(const SimConfig& cfg, const RunOptions& options) {
    cfg.validate();
    const Discretization disc =
        Discretization::build(Mesh::structured(cfg.domain, cfg.nx, cfg.ny), cfg.mass_lumping);

    SpeciesFields initial = options.initial_override ? *options.initial_override
                                                     : build_triple_junction_ic(disc.mesh, cfg.ic);
    for (const auto& f : initial) {
        if (f.size() != disc.mesh.num_nodes()) {
            throw DimensionError("initial field length does not match the mesh");
        }
    }

    const std::int64_t n_steps = cfg.num_steps();
    std::multimap<std::int64_t, double> schedule;
    for (double t : cfg.snapshot_times) {
        schedule.emplace(std::min(snapshot_step(t, cfg.dt), n_steps), t);
    }

    std::ofstream diag_file;
    if (options.write_files) {
        std::filesystem::create_directories(cfg.output.directory);
        diag_file.open(cfg.output.directory / "diagnostics.csv", std::ios::binary);
        if (!diag_file) {
            throw IoError("cannot open diagnostics.csv in " + cfg.output.directory.string());
        }
        diag_file << diagnostics_csv_header() << '\n';
    }

    StepOptions step_opts = options.step;
    step_opts.paper_literal_stages = step_opts.paper_literal_stages || cfg.paper_literal_stages;

    SimulationResult result;
    SpeciesState state = SpeciesState::bootstrap(std::move(initial));

    auto record = [&](const SpeciesState& s) {
        const Diagnostics d = diagnostics(s.u_curr, disc.mass, s.t);
        result.diagnostics.push_back(d);
        if (diag_file.is_open()) {
            diag_file << diagnostics_csv_row(d) << '\n';
            diag_file.flush();
        }
        const auto [first, last] = schedule.equal_range(s.step_index);
        for (auto it = first; it != last; ++it) {
            Snapshot snap{s.t, it->second, s.step_index, s.u_curr, cfg.source_hash};
            if (options.write_files) {
                const std::string stem = "snapshot_t" + time_label(it->second);
                if (cfg.output.ppm) {
                    write_ppm(snap, disc.mesh, cfg.output.directory / (stem + ".ppm"));
                }
                if (cfg.output.csv) {
                    write_csv(snap, disc.mesh, cfg.output.directory / (stem + ".csv"));
                }
            }
            result.snapshots.push_back(std::move(snap));
        }
        if (options.on_step) {
            options.on_step(s, d);
        }
    };

    record(state);
    for (std::int64_t n = 0; n < n_steps; ++n) {
        try {
            state = step(state, disc, cfg.params, cfg.dt, cfg.solver, step_opts);
        } catch (const Error& e) {
            throw SimulationError("step " + std::to_string(n + 1) + " failed: " + e.what(), n + 1);
        }
        record(state);
    }
    result.final_state = std::move(state);
    return result;
}

double mass_norm_distance(const SpeciesFields& a, const SpeciesFields& b, const SparseMatrix& mass) {
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (a[i].size() != b[i].size()) {
            throw DimensionError("mass_norm_distance: length mismatch");
        }
        std::vector<double> d(a[i].size());
        for (std::size_t k = 0; k < d.size(); ++k) {
            d[k] = a[i][k] - b[i][k];
        }
        total += dot(d, spmv(mass, d));
    }
    return std::sqrt(std::max(total, 0.0));
}

std::vector<ConvergenceRow> convergence_study(const SimConfig& base, const std::vector<double>& dts,
                                              const StepOptions& step_options) {
    if (dts.size() < 3) {
        throw ConfigError("convergence: need at least three time steps");
    }
    for (std::size_t k = 0; k < dts.size(); ++k) {
        if (!(dts[k] > 0.0)) {
            throw ConfigError("convergence: time steps must be positive");
        }
        if (k > 0 && !(dts[k] < dts[k - 1])) {
            throw ConfigError("convergence: time steps must be strictly decreasing");
        }
        const double ratio = base.t_end / dts[k];
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
            throw ConfigError("convergence: dt=" + std::to_string(dts[k]) + " does not divide t_end");
        }
    }

    std::vector<SpeciesFields> finals;
    for (double dt : dts) {
        SimConfig cfg = base;
        cfg.dt = dt;
        cfg.snapshot_times.clear();
        RunOptions opts;
        opts.write_files = false;
        opts.step = step_options;
        finals.push_back(run_simulation(cfg, opts).final_state.u_curr);
    }

    const SparseMatrix mass = assemble_mass(Mesh::structured(base.domain, base.nx, base.ny));
    const std::size_t n = dts.size();
    std::vector<ConvergenceRow> rows(n);
    for (std::size_t k = 0; k < n; ++k) {
        rows[k].dt = dts[k];
        rows[k].error_vs_finest = mass_norm_distance(finals[k], finals[n - 1], mass);
        rows[k].successive_difference =
            k + 1 < n ? mass_norm_distance(finals[k], finals[k + 1], mass) : std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t k = 0; k < n; ++k) {
        rows[k].observed_order = std::numeric_limits<double>::quiet_NaN();
        if (k + 2 < n && rows[k + 1].successive_difference > 0.0) {
            rows[k].observed_order = std::log(rows[k].successive_difference / rows[k + 1].successive_difference) /
                                     std::log(dts[k] / dts[k + 1]);
        }
    }
    return rows;
}

} // namespace lvfem
