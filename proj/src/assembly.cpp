#include "lvfem/assembly.hpp"

#include <string>

#include "lvfem/error.hpp"

namespace lvfem {

namespace {

using LocalMatrix = std::array<std::array<double, 4>, 4>;

void scatter(SparseMatrix& global, const ElementNodes& nodes, const LocalMatrix& local) {
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            global.add_to(nodes[a], nodes[b], local[a][b]);
        }
    }
}

/// Assembles integral w(x) phi_k phi_j where w is supplied per element and
/// quadrature point index.
template <class Weight>
SparseMatrix assemble_weighted(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern, Weight&& weight) {
    SparseMatrix m(std::move(pattern));
    const auto& rule = gauss_2x2();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        LocalMatrix local{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const ShapeValues s = shape_eval(rule[q].point);
            const ElementGeometry g = mesh.element_geometry(e, rule[q].point);
            const double w = rule[q].weight * g.det_jacobian * weight(e, s);
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t b = 0; b < 4; ++b) {
                    local[a][b] += w * s.value[a] * s.value[b];
                }
            }
        }
        scatter(m, mesh.element(e), local);
    }
    m.mark_symmetric();
    return m;
}

void check_field(const Mesh& mesh, std::span<const double> f, const char* name) {
    if (f.size() != mesh.num_nodes()) {
        throw DimensionError(std::string(name) + " has " + std::to_string(f.size()) + " entries, mesh has " +
                             std::to_string(mesh.num_nodes()) + " nodes");
    }
}

} // namespace

std::shared_ptr<const SparsityPattern> build_pattern(const Mesh& mesh) {
    std::vector<std::vector<std::size_t>> rows(mesh.num_nodes());
    for (const ElementNodes& en : mesh.elements()) {
        for (std::size_t a : en) {
            rows[a].insert(rows[a].end(), en.begin(), en.end());
        }
    }
    return std::make_shared<const SparsityPattern>(SparsityPattern::from_rows(mesh.num_nodes(), std::move(rows)));
}

SparseMatrix assemble_mass(const Mesh& mesh) { return assemble_mass(mesh, build_pattern(mesh)); }

SparseMatrix assemble_mass(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern) {
    return assemble_weighted(mesh, std::move(pattern), [](std::size_t, const ShapeValues&) { return 1.0; });
}

SparseMatrix assemble_stiffness(const Mesh& mesh) { return assemble_stiffness(mesh, build_pattern(mesh)); }

SparseMatrix assemble_stiffness(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern) {
    SparseMatrix k(std::move(pattern));
    const auto& rule = gauss_2x2();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        LocalMatrix local{};
        for (const auto& qp : rule) {
            const ElementGeometry g = mesh.element_geometry(e, qp.point);
            const double w = qp.weight * g.det_jacobian;
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t b = 0; b < 4; ++b) {
                    local[a][b] += w * (g.d_x[a] * g.d_x[b] + g.d_y[a] * g.d_y[b]);
                }
            }
        }
        scatter(k, mesh.element(e), local);
    }
    k.mark_symmetric();
    return k;
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, const SpeciesFields& args, int species,
                                    const ModelParams& params) {
    return assemble_weighted_mass(mesh, args, species, params, build_pattern(mesh));
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, const SpeciesFields& args, int species,
                                    const ModelParams& params, std::shared_ptr<const SparsityPattern> pattern) {
    for (const auto& f : args) {
        check_field(mesh, f, "growth argument field");
    }
    return assemble_weighted(mesh, std::move(pattern), [&](std::size_t e, const ShapeValues& s) {
        const ElementNodes& en = mesh.element(e);
        Triple u{};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t a = 0; a < 4; ++a) {
                u[i] += s.value[a] * args[i][en[a]];
            }
        }
        return growth_f(species, u, params);
    });
}

SparseMatrix assemble_coefficient_mass(const Mesh& mesh, std::span<const double> coefficient,
                                       std::shared_ptr<const SparsityPattern> pattern) {
    check_field(mesh, coefficient, "coefficient field");
    return assemble_weighted(mesh, std::move(pattern), [&](std::size_t e, const ShapeValues& s) {
        const ElementNodes& en = mesh.element(e);
        double c = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            c += s.value[a] * coefficient[en[a]];
        }
        return c;
    });
}

SparseMatrix lump_mass(const SparseMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("lump_mass: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const std::vector<double> sums = m.row_sums();
    return SparseMatrix::diagonal(sums);
}

} // namespace lvfem
