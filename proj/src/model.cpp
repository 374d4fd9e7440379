#include "lvfem/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "lvfem/error.hpp"

namespace lvfem {

using cplx = std::complex<double>;

void ModelParams::validate() const {
    if (!(a > 0.0)) {
        throw ConfigError("params.a must be > 0");
    }
    if (!(b > 0.0)) {
        throw ConfigError("params.b must be > 0");
    }
    if (!(alpha > 0.0)) {
        throw ConfigError("params.alpha must be > 0");
    }
    if (!(eps2 > 0.0 && eps2 <= 1.0)) {
        throw ConfigError("params.eps2 must lie in (0, 1]");
    }
    if (!(eps3 > 0.0 && eps3 <= 1.0)) {
        throw ConfigError("params.eps3 must lie in (0, 1]");
    }
}

double ModelParams::diffusivity(int species) const {
    switch (species) {
    case 1: return 1.0;
    case 2: return eps2;
    case 3: return eps3;
    default: throw DimensionError("species index must be 1, 2 or 3");
    }
}

namespace {

Matrix3 interaction_matrix(const ModelParams& p) {
    return {{{1.0, p.a, p.b}, {p.b, 1.0, p.a}, {p.alpha, p.b, 1.0}}};
}

} // namespace

double growth_f(int species, const Triple& u, const ModelParams& p) {
    switch (species) {
    case 1: return 1.0 - u[0] - p.a * u[1] - p.b * u[2];
    case 2: return 1.0 - p.b * u[0] - u[1] - p.a * u[2];
    case 3: return 1.0 - p.alpha * u[0] - p.b * u[1] - u[2];
    default: throw DimensionError("species index must be 1, 2 or 3");
    }
}

Triple homogeneous_rhs(const Triple& u, const ModelParams& p) {
    return {u[0] * growth_f(1, u, p), u[1] * growth_f(2, u, p), u[2] * growth_f(3, u, p)};
}

Matrix3 jacobian_at(const Triple& u, const ModelParams& p) {
    // g_i = u_i f_i with f_i = 1 - sum_j A_ij u_j, so
    // dg_i/du_j = delta_ij f_i - u_i A_ij.
    const Matrix3 A = interaction_matrix(p);
    Matrix3 j{};
    for (int i = 0; i < 3; ++i) {
        const double fi = growth_f(i + 1, u, p);
        for (int k = 0; k < 3; ++k) {
            j[i][k] = (i == k ? fi : 0.0) - u[i] * A[i][k];
        }
    }
    return j;
}

namespace {

struct CubicCoefficients {
    // lambda^3 + c2 lambda^2 + c1 lambda + c0
    double c2, c1, c0;
};

CubicCoefficients characteristic_cubic(const Matrix3& j) {
    const double tr = j[0][0] + j[1][1] + j[2][2];
    const double minors = j[0][0] * j[1][1] - j[0][1] * j[1][0] + j[0][0] * j[2][2] - j[0][2] * j[2][0] +
                          j[1][1] * j[2][2] - j[1][2] * j[2][1];
    const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                       j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                       j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    return {-tr, minors, -det};
}

cplx eval_cubic(const CubicCoefficients& c, cplx x) { return ((x + c.c2) * x + c.c1) * x + c.c0; }
cplx eval_cubic_derivative(const CubicCoefficients& c, cplx x) { return (3.0 * x + 2.0 * c.c2) * x + c.c1; }

} // namespace

std::complex<double> characteristic_polynomial(const Matrix3& j, std::complex<double> lambda) {
    // det(J - lambda I) = -(lambda^3 + c2 lambda^2 + c1 lambda + c0)
    return -eval_cubic(characteristic_cubic(j), lambda);
}

namespace {

/// One real root of the cubic: Cardano when there is a single real root,
/// the trigonometric form (largest-magnitude root) when all three are real.
double real_root(const CubicCoefficients& c) {
    const double shift = -c.c2 / 3.0;
    const double p = c.c1 - c.c2 * c.c2 / 3.0;
    const double q = 2.0 * c.c2 * c.c2 * c.c2 / 27.0 - c.c2 * c.c1 / 3.0 + c.c0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    double t = 0.0;
    if (p == 0.0 && q == 0.0) {
        t = 0.0;
    } else if (disc > 0.0) {
        const double u = std::cbrt(-q / 2.0 - std::copysign(std::sqrt(disc), q));
        t = u - p / (3.0 * u);
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        double best = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double tk = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
            if (k == 0 || std::abs(tk + shift) > std::abs(best + shift)) {
                best = tk;
            }
        }
        t = best;
    }

    double r = t + shift;
    for (int it = 0; it < 2; ++it) {
        const double f = ((r + c.c2) * r + c.c1) * r + c.c0;
        const double df = (3.0 * r + 2.0 * c.c2) * r + c.c1;
        if (df == 0.0) {
            break;
        }
        const double candidate = r - f / df;
        const double fc = ((candidate + c.c2) * candidate + c.c1) * candidate + c.c0;
        if (!(std::abs(fc) < std::abs(f))) {
            break;
        }
        r = candidate;
    }
    return r;
}

/// Roots of x^2 + e1 x + e0. Discriminants at rounding level are treated
/// as zero so that double roots come out real and equal.
std::array<cplx, 2> real_quadratic_roots(double e1, double e0) {
    double disc = e1 * e1 - 4.0 * e0;
    const double scale = e1 * e1 + 4.0 * std::abs(e0);
    if (std::abs(disc) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        disc = 0.0;
    }
    if (disc >= 0.0) {
        const double qq = -0.5 * (e1 + std::copysign(std::sqrt(disc), e1));
        if (qq == 0.0) {
            return {cplx(0.0), cplx(0.0)};
        }
        return {cplx(qq), cplx(e0 / qq)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {cplx(-0.5 * e1, -im), cplx(-0.5 * e1, im)};
}

} // namespace

Eigenvalues3 eigenvalues_3x3(const Matrix3& j) {
    const CubicCoefficients c = characteristic_cubic(j);
    const double r = real_root(c);

    // Deflate: cubic = (x - r)(x^2 + e1 x + e0).
    const double e1 = c.c2 + r;
    const double e0 = std::abs(r) > 1.0 ? -c.c0 / r : c.c1 + r * e1;
    const auto quad = real_quadratic_roots(e1, e0);

    Eigenvalues3 roots{cplx(r), quad[0], quad[1]};
    for (std::size_t k = 1; k < 3; ++k) {
        cplx& x = roots[k];
        const cplx d = eval_cubic_derivative(c, x);
        if (std::abs(d) > 1e-8) {
            const cplx polished = x - eval_cubic(c, x) / d;
            const cplx snapped = x.imag() == 0.0 ? cplx(polished.real(), 0.0) : polished;
            if (std::abs(eval_cubic(c, snapped)) < std::abs(eval_cubic(c, x))) {
                x = snapped;
            }
        }
    }
    // Keep a complex pair exactly conjugate.
    if (roots[1].imag() != 0.0) {
        roots[2] = std::conj(roots[1]);
    }

    std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
        if (x.real() != y.real()) {
            return x.real() < y.real();
        }
        return x.imag() < y.imag();
    });
    return roots;
}

std::string to_string(StabilityKind kind) {
    switch (kind) {
    case StabilityKind::UnstableNode: return "unstable node";
    case StabilityKind::Saddle: return "saddle";
    case StabilityKind::AsymptoticallyStable: return "asymptotically stable";
    case StabilityKind::NeutrallyStable: return "neutrally stable";
    case StabilityKind::NonHyperbolic: return "non-hyperbolic";
    }
    return "unknown";
}

StabilityKind classify(const Eigenvalues3& eigenvalues) {
    int negative = 0;
    int positive = 0;
    int zero_real = 0;
    int zero_real_oscillatory = 0;
    for (const cplx& l : eigenvalues) {
        if (std::abs(l.real()) <= kZeroRealPartTol) {
            ++zero_real;
            if (std::abs(l.imag()) > kZeroRealPartTol) {
                ++zero_real_oscillatory;
            }
        } else if (l.real() < 0.0) {
            ++negative;
        } else {
            ++positive;
        }
    }
    if (zero_real > 0) {
        // A purely imaginary pair with everything else decaying is a centre.
        if (positive == 0 && zero_real == zero_real_oscillatory) {
            return StabilityKind::NeutrallyStable;
        }
        return StabilityKind::NonHyperbolic;
    }
    if (positive == 0) {
        return StabilityKind::AsymptoticallyStable;
    }
    if (negative == 0) {
        return StabilityKind::UnstableNode;
    }
    return StabilityKind::Saddle;
}

namespace {

Equilibrium make_equilibrium(std::string label, const Triple& point, const ModelParams& p) {
    Equilibrium eq;
    eq.label = std::move(label);
    eq.point = point;
    eq.eigenvalues = eigenvalues_3x3(jacobian_at(point, p));
    eq.kind = classify(eq.eigenvalues);
    return eq;
}

/// Solves the 2x2 system [m00 m01; m10 m11] x = (1, 1); nullopt if singular.
std::optional<std::array<double, 2>> solve_pair(double m00, double m01, double m10, double m11) {
    const double det = m00 * m11 - m01 * m10;
    if (std::abs(det) <= 1e-14 * std::max({std::abs(m00 * m11), std::abs(m01 * m10), 1.0})) {
        return std::nullopt;
    }
    return std::array<double, 2>{(m11 - m01) / det, (m00 - m10) / det};
}

} // namespace

std::vector<Equilibrium> equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out;
    out.push_back(make_equilibrium("A", {0.0, 0.0, 0.0}, p));
    out.push_back(make_equilibrium("B", {0.0, 0.0, 1.0}, p));
    out.push_back(make_equilibrium("C", {0.0, 1.0, 0.0}, p));
    out.push_back(make_equilibrium("D", {1.0, 0.0, 0.0}, p));

    const Matrix3 A = interaction_matrix(p);
    // Two-species states: species (i, k) present, the third absent.
    constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};
    constexpr std::array<const char*, 3> pair_labels{"P12", "P23", "P13"};
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        const auto [i, k] = pairs[n];
        const auto sol = solve_pair(A[i][i], A[i][k], A[k][i], A[k][k]);
        if (!sol || !((*sol)[0] > 0.0) || !((*sol)[1] > 0.0)) {
            continue;
        }
        Triple pt{0.0, 0.0, 0.0};
        pt[static_cast<std::size_t>(i)] = (*sol)[0];
        pt[static_cast<std::size_t>(k)] = (*sol)[1];
        out.push_back(make_equilibrium(pair_labels[n], pt, p));
    }

    Triple interior{};
    if (p.alpha == p.a) {
        const double c = 1.0 / (1.0 + p.a + p.b);
        interior = {c, c, c};
    } else {
        // Cramer's rule on A u = (1, 1, 1).
        auto det3 = [](const Matrix3& m) {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        const double d = det3(A);
        if (std::abs(d) <= 1e-14) {
            return out;
        }
        for (int col = 0; col < 3; ++col) {
            Matrix3 m = A;
            for (int row = 0; row < 3; ++row) {
                m[row][col] = 1.0;
            }
            interior[static_cast<std::size_t>(col)] = det3(m) / d;
        }
    }
    if (interior[0] > 0.0 && interior[1] > 0.0 && interior[2] > 0.0) {
        out.push_back(make_equilibrium("E", interior, p));
    }
    return out;
}

} // namespace lvfem
