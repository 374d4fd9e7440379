#pragma once

#include "lvfem/assembly.hpp"
#include "lvfem/config.hpp"
#include "lvfem/mesh.hpp"

namespace lvfem {

/// Segregated start with a single triple junction. With the sector profile,
/// species i takes inside_value on the angular sector
/// [theta0 + (i-1) 2pi/3, theta0 + i 2pi/3) around the junction and
/// outside_value elsewhere. The smooth profile replaces each sector by a
/// tanh front along its bisector with the configured width.
/// Throws ConfigError when the junction lies outside the mesh domain.
SpeciesFields build_triple_junction_ic(const Mesh& mesh, const InitialConditionConfig& ic);

/// Every node of every species set to the same value.
SpeciesFields constant_fields(const Mesh& mesh, double value);

} // namespace lvfem
