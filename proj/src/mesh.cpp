#include "lvfem/mesh.hpp"

#include <cmath>
#include <string>

#include "lvfem/error.hpp"

namespace lvfem {

namespace {

constexpr std::array<double, 4> kCornerXi{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kCornerEta{-1.0, -1.0, 1.0, 1.0};

} // namespace

ShapeValues shape_eval(RefPoint p) {
    ShapeValues s;
    for (std::size_t a = 0; a < 4; ++a) {
        const double sx = 1.0 + kCornerXi[a] * p.xi;
        const double sy = 1.0 + kCornerEta[a] * p.eta;
        s.value[a] = 0.25 * sx * sy;
        s.d_xi[a] = 0.25 * kCornerXi[a] * sy;
        s.d_eta[a] = 0.25 * kCornerEta[a] * sx;
    }
    return s;
}

Mesh Mesh::structured(const Rect& domain, std::size_t nx, std::size_t ny) {
    if (nx < 2 || ny < 2) {
        throw MeshError("node counts must be >= 2 per axis (got nx=" + std::to_string(nx) +
                        ", ny=" + std::to_string(ny) + ")");
    }
    if (!(domain.x_min < domain.x_max) || !(domain.y_min < domain.y_max)) {
        throw MeshError("domain bounds must satisfy x_min < x_max and y_min < y_max");
    }

    Mesh mesh;
    mesh.domain_ = domain;
    mesh.nx_ = nx;
    mesh.ny_ = ny;
    mesh.hx_ = (domain.x_max - domain.x_min) / static_cast<double>(nx - 1);
    mesh.hy_ = (domain.y_max - domain.y_min) / static_cast<double>(ny - 1);

    mesh.nodes_.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            mesh.nodes_.push_back({domain.x_min + static_cast<double>(i) * mesh.hx_,
                                   domain.y_min + static_cast<double>(j) * mesh.hy_});
        }
    }

    mesh.elements_.reserve((nx - 1) * (ny - 1));
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const std::size_t ll = j * nx + i;
            mesh.elements_.push_back({ll, ll + 1, ll + 1 + nx, ll + nx});
        }
    }
    return mesh;
}

ElementGeometry Mesh::element_geometry(std::size_t e, RefPoint p) const {
    const ElementNodes& en = elements_[e];
    const ShapeValues s = shape_eval(p);

    // Jacobian of the bilinear map: [dx/dxi dx/deta; dy/dxi dy/deta].
    double j11 = 0.0, j12 = 0.0, j21 = 0.0, j22 = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        const Point2& x = nodes_[en[a]];
        j11 += s.d_xi[a] * x.x;
        j12 += s.d_eta[a] * x.x;
        j21 += s.d_xi[a] * x.y;
        j22 += s.d_eta[a] * x.y;
    }
    const double det = j11 * j22 - j12 * j21;
    if (!(det > 0.0)) {
        throw MeshError("degenerate element " + std::to_string(e) +
                        ": non-positive Jacobian determinant");
    }

    ElementGeometry g;
    g.det_jacobian = det;
    const double inv = 1.0 / det;
    for (std::size_t a = 0; a < 4; ++a) {
        // grad_x = J^{-T} grad_xi
        g.d_x[a] = inv * (j22 * s.d_xi[a] - j21 * s.d_eta[a]);
        g.d_y[a] = inv * (-j12 * s.d_xi[a] + j11 * s.d_eta[a]);
    }
    return g;
}

Point2 Mesh::map_to_physical(std::size_t e, RefPoint p) const {
    const ElementNodes& en = elements_[e];
    const ShapeValues s = shape_eval(p);
    Point2 out;
    for (std::size_t a = 0; a < 4; ++a) {
        out.x += s.value[a] * nodes_[en[a]].x;
        out.y += s.value[a] * nodes_[en[a]].y;
    }
    return out;
}

const std::array<QuadraturePoint, 4>& gauss_2x2() {
    static const std::array<QuadraturePoint, 4> rule = [] {
        const double g = 1.0 / std::sqrt(3.0);
        return std::array<QuadraturePoint, 4>{{
            {{-g, -g}, 1.0},
            {{g, -g}, 1.0},
            {{g, g}, 1.0},
            {{-g, g}, 1.0},
        }};
    }();
    return rule;
}

} // namespace lvfem
