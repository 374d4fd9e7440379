#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace lvfem {

struct Rect {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Point on the reference square [-1, 1]^2.
struct RefPoint {
    double xi = 0.0;
    double eta = 0.0;
};

using ElementNodes = std::array<std::size_t, 4>;

/// Values and reference-space gradients of the four Q1 basis functions.
/// Local node a sits at corner (xi_a, eta_a) = (-1,-1), (1,-1), (1,1), (-1,1).
struct ShapeValues {
    std::array<double, 4> value{};
    std::array<double, 4> d_xi{};
    std::array<double, 4> d_eta{};
};

ShapeValues shape_eval(RefPoint p);

/// Physical-space basis gradients and the Jacobian determinant of the
/// bilinear map at a reference point.
struct ElementGeometry {
    std::array<double, 4> d_x{};
    std::array<double, 4> d_y{};
    double det_jacobian = 0.0;
};

/// Structured grid of Q1 quadrilaterals over an axis-aligned rectangle.
///
/// Nodes are numbered row-major from (x_min, y_min). Element (i, j) has its
/// lower-left node at j*nx + i and lists its nodes counter-clockwise
/// starting there. Immutable after construction.
class Mesh {
public:
    /// Throws MeshError on inverted bounds or fewer than two nodes per axis.
    static Mesh structured(const Rect& domain, std::size_t nx, std::size_t ny);

    const Rect& domain() const { return domain_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_elements() const { return elements_.size(); }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    std::span<const Point2> nodes() const { return nodes_; }
    const Point2& node(std::size_t k) const { return nodes_[k]; }
    std::span<const ElementNodes> elements() const { return elements_; }
    const ElementNodes& element(std::size_t e) const { return elements_[e]; }

    /// Throws MeshError on a non-positive Jacobian determinant.
    ElementGeometry element_geometry(std::size_t e, RefPoint p) const;

    /// Maps a reference point of element e to physical coordinates.
    Point2 map_to_physical(std::size_t e, RefPoint p) const;

private:
    Rect domain_;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double hx_ = 0.0;
    double hy_ = 0.0;
    std::vector<Point2> nodes_;
    std::vector<ElementNodes> elements_;
};

/// 2x2 Gauss-Legendre rule on the reference square (unit weights).
struct QuadraturePoint {
    RefPoint point;
    double weight;
};

const std::array<QuadraturePoint, 4>& gauss_2x2();

} // namespace lvfem
