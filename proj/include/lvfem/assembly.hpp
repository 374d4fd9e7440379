#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "lvfem/mesh.hpp"
#include "lvfem/model.hpp"
#include "lvfem/sparse.hpp"

namespace lvfem {

/// Nodal values of one species, one entry per mesh node.
using NodalField = std::vector<double>;
using SpeciesFields = std::array<NodalField, 3>;

/// Node-to-node coupling of a Q1 mesh (each node couples to its up to nine
/// neighbours). All matrices assembled on one mesh share this pattern.
std::shared_ptr<const SparsityPattern> build_pattern(const Mesh& mesh);

/// Consistent mass matrix, 2x2 Gauss quadrature.
SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_mass(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern);

/// Stiffness matrix <grad phi_j, grad phi_k>. Rows sum to zero, which is the
/// discrete form of the homogeneous Neumann condition.
SparseMatrix assemble_stiffness(const Mesh& mesh);
SparseMatrix assemble_stiffness(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern);

/// Mass matrix weighted by the frozen growth factor of `species`:
///   B_jk = integral f_i(u1, u2, u3) phi_k phi_j
/// The three argument fields are interpolated to each quadrature point
/// before f_i is applied.
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const SpeciesFields& args, int species,
                                    const ModelParams& params);
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const SpeciesFields& args, int species,
                                    const ModelParams& params, std::shared_ptr<const SparsityPattern> pattern);

/// Mass matrix weighted by an arbitrary nodal coefficient field c:
///   W_jk = integral c_h phi_k phi_j
SparseMatrix assemble_coefficient_mass(const Mesh& mesh, std::span<const double> coefficient,
                                       std::shared_ptr<const SparsityPattern> pattern);

/// Row-sum diagonal of a square matrix.
SparseMatrix lump_mass(const SparseMatrix& m);

} // namespace lvfem
