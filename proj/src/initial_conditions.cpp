#include "lvfem/initial_conditions.hpp"

#include <cmath>
#include <numbers>

#include "lvfem/error.hpp"

namespace lvfem {

SpeciesFields build_triple_junction_ic(const Mesh& mesh, const InitialConditionConfig& ic) {
    const Rect& d = mesh.domain();
    const Point2 c = ic.junction_or_default(d);
    if (c.x < d.x_min || c.x > d.x_max || c.y < d.y_min || c.y > d.y_max) {
        throw ConfigError("ic.junction lies outside the domain");
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double sector = two_pi / 3.0;
    const std::size_t n = mesh.num_nodes();
    SpeciesFields u{NodalField(n, ic.outside_value), NodalField(n, ic.outside_value), NodalField(n, ic.outside_value)};

    for (std::size_t k = 0; k < n; ++k) {
        const Point2& x = mesh.node(k);
        const double dx = x.x - c.x;
        const double dy = x.y - c.y;
        if (ic.profile == IcProfile::Sectors) {
            // Angle relative to theta0, in [0, 2pi).
            double theta = std::atan2(dy, dx) - ic.theta0;
            theta = std::fmod(theta, two_pi);
            if (theta < 0.0) {
                theta += two_pi;
            }
            std::size_t owner = static_cast<std::size_t>(theta / sector);
            if (owner > 2) {
                owner = 2;
            }
            u[owner][k] = ic.inside_value;
        } else {
            for (std::size_t i = 0; i < 3; ++i) {
                const double bisector = ic.theta0 + (static_cast<double>(i) + 0.5) * sector;
                const double s = (dx * std::cos(bisector) + dy * std::sin(bisector)) / ic.width;
                u[i][k] = ic.outside_value + (ic.inside_value - ic.outside_value) * 0.5 * (1.0 + std::tanh(s));
            }
        }
    }
    return u;
}

SpeciesFields constant_fields(const Mesh& mesh, double value) {
    const NodalField f(mesh.num_nodes(), value);
    return {f, f, f};
}

} // namespace lvfem
