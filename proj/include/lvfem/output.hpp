#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lvfem/assembly.hpp"
#include "lvfem/mesh.hpp"
#include "lvfem/sparse.hpp"

namespace lvfem {

struct Snapshot {
    /// Time of the step that was written.
    double t = 0.0;
    /// Time that was asked for; t <= t_requested < t + dt.
    double t_requested = 0.0;
    std::int64_t step_index = 0;
    SpeciesFields u;
    std::uint64_t config_hash = 0;
};

struct Diagnostics {
    double t = 0.0;
    std::array<double, 3> mass{};
    std::array<double, 3> min{};
    std::array<double, 3> max{};
};

/// Per-species total mass 1^T M u_i and nodal extrema.
Diagnostics diagnostics(const SpeciesFields& u, const SparseMatrix& mass, double t = 0.0);

/// Encodes the three species as a binary P6 image: R = u3, G = u1, B = u2,
/// each clamped to [0, 1] and scaled to 255. Top image row is y_max.
std::vector<unsigned char> encode_ppm(const SpeciesFields& u, const Mesh& mesh);
void write_ppm(const Snapshot& snapshot, const Mesh& mesh, const std::filesystem::path& path);

/// Header x,y,u1,u2,u3; one row per node; 17 significant digits; LF.
void write_csv(const Snapshot& snapshot, const Mesh& mesh, const std::filesystem::path& path);

struct CsvFields {
    std::vector<Point2> nodes;
    SpeciesFields u;
};

CsvFields read_csv(const std::filesystem::path& path);

std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const Diagnostics& d);

/// Text form of a time used in snapshot file names (e.g. "150", "0.5").
std::string time_label(double t);

} // namespace lvfem
