#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lvfem/linalg.hpp"
#include "lvfem/mesh.hpp"
#include "lvfem/model.hpp"

namespace lvfem {

enum class IcProfile {
    /// Piecewise-constant 2*pi/3 sectors around the junction.
    Sectors,
    /// tanh fronts along each sector's bisector; smooth, for convergence runs.
    Smooth,
};

struct InitialConditionConfig {
    /// Defaults to the centre of the top-right quarter of the domain.
    std::optional<Point2> junction;
    double theta0 = 0.0;
    double inside_value = 1.0;
    double outside_value = 0.0;
    IcProfile profile = IcProfile::Sectors;
    double width = 0.5;

    Point2 junction_or_default(const Rect& domain) const;
};

struct OutputConfig {
    std::filesystem::path directory = "out";
    bool ppm = true;
    bool csv = true;
};

struct SimConfig {
    Rect domain{-2.0, 2.0, -2.0, 2.0};
    std::size_t nx = 2;
    std::size_t ny = 2;
    double dt = 1.0;
    double t_end = 0.0;
    ModelParams params;
    InitialConditionConfig ic;
    std::vector<double> snapshot_times;
    OutputConfig output;
    SolverConfig solver;
    bool mass_lumping = false;
    bool paper_literal_stages = false;

    /// FNV-1a hash of the source document (0 for programmatic configs).
    std::uint64_t source_hash = 0;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    /// Number of whole steps from 0 to t_end.
    std::int64_t num_steps() const;
};

/// Parses a strict JSON configuration: unknown keys are rejected, optional
/// keys take their defaults, and the result is validated. Parse errors
/// report line and column.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data);

} // namespace lvfem
