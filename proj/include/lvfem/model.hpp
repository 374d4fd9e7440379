#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace lvfem {

/// Coefficients of the rescaled three-species competition model.
///
/// Species 1 has unit diffusivity; eps2 and eps3 are the diffusivity ratios
/// of species 2 and 3. The interaction matrix is
///   [1 a b; b 1 a; alpha b 1]
/// with alpha = a in the symmetric (cyclic) case.
struct ModelParams {
    double a = 1.0;
    double b = 2.0;
    double alpha = 1.0;
    double eps2 = 1.0;
    double eps3 = 1.0;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    double diffusivity(int species) const;
};

using Triple = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;
using Eigenvalues3 = std::array<std::complex<double>, 3>;

/// Linear growth factor f_i (species index 1..3).
double growth_f(int species, const Triple& u, const ModelParams& p);

/// Right-hand side g_i = u_i f_i of the spatially homogeneous system.
Triple homogeneous_rhs(const Triple& u, const ModelParams& p);

Matrix3 jacobian_at(const Triple& u, const ModelParams& p);

/// Roots of det(J - lambda I) by the closed-form cubic followed by one
/// Newton polish per root. Sorted by (real, imag).
Eigenvalues3 eigenvalues_3x3(const Matrix3& j);

/// det(J - lambda I) evaluated through the characteristic cubic.
std::complex<double> characteristic_polynomial(const Matrix3& j, std::complex<double> lambda);

enum class StabilityKind {
    UnstableNode,
    Saddle,
    AsymptoticallyStable,
    NeutrallyStable,
    NonHyperbolic,
};

std::string to_string(StabilityKind kind);

/// Real parts within this distance of zero count as zero.
inline constexpr double kZeroRealPartTol = 1e-12;

StabilityKind classify(const Eigenvalues3& eigenvalues);

struct Equilibrium {
    std::string label;
    Triple point{};
    Eigenvalues3 eigenvalues{};
    StabilityKind kind = StabilityKind::NonHyperbolic;
};

/// All equilibria with nonnegative coordinates: the extinction state, the
/// three single-species states, the two-species edge states with both
/// coordinates strictly positive, and the interior coexistence state when
/// all of its coordinates are strictly positive.
std::vector<Equilibrium> equilibria(const ModelParams& p);

} // namespace lvfem
