#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <vector>

namespace lvfem {

/// Which fixed point of the scalar logistic reduction u' = lambda u (1 - u)
/// the linearisation is taken about.
enum class FixedPoint { Zero = 0, One = 1 };

FixedPoint fixed_point_from_int(int v);

/// One step of the semi-linearised scheme on the scalar reduction,
/// z = dt * lambda. Throws PoleError when the denominator vanishes.
double g_map(double u_prev, double u_curr, double z);

using QuadraticRoots = std::array<std::complex<double>, 2>;

/// Roots of the characteristic polynomial of the scheme linearised about
/// the given fixed point:
///   zero: xi^2 - (2+z)/(2-z) xi
///   one:  xi^2 - (1 - 3z/2) xi - z/2
/// Throws PoleError for z = 2 at the zero fixed point.
QuadraticRoots char_roots(FixedPoint fp, std::complex<double> z);

/// Characteristic polynomial value at xi.
std::complex<double> char_polynomial(FixedPoint fp, std::complex<double> z, std::complex<double> xi);

struct StabilitySample {
    std::complex<double> z;
    FixedPoint fixed_point = FixedPoint::Zero;
    QuadraticRoots roots{};
    double max_modulus = 0.0;
    /// max_modulus <= 1 (marginal roots count as stable).
    bool stable = false;
};

/// Samples at the pole are reported unstable with infinite modulus.
StabilitySample stability_sample(FixedPoint fp, std::complex<double> z);

struct Range {
    double min = 0.0;
    double max = 0.0;
};

/// n x n samples of the complex z-plane. Row r holds im = im.max - r*dim
/// (top row first, as in an image); column c holds re = re.min + c*dre.
struct StabilityRaster {
    FixedPoint fixed_point = FixedPoint::Zero;
    Range re;
    Range im;
    std::size_t n = 0;
    std::vector<StabilitySample> samples;

    const StabilitySample& at(std::size_t row, std::size_t col) const { return samples[row * n + col]; }
};

/// Throws std::invalid_argument when n < 2 or a range is empty.
StabilityRaster region_raster(FixedPoint fp, Range re, Range im, std::size_t n);

/// CSV with columns re_z,im_z,max_modulus,stable in raster order.
void write_raster_csv(const StabilityRaster& raster, const std::filesystem::path& path);

/// Binary PPM, stable samples dark and unstable samples light.
void write_raster_ppm(const StabilityRaster& raster, const std::filesystem::path& path);

} // namespace lvfem
