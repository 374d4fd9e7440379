#include "lvfem/stability.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "lvfem/error.hpp"

namespace lvfem {

using cplx = std::complex<double>;

FixedPoint fixed_point_from_int(int v) {
    if (v == 0) {
        return FixedPoint::Zero;
    }
    if (v == 1) {
        return FixedPoint::One;
    }
    throw std::invalid_argument("fixed point must be 0 or 1, got " + std::to_string(v));
}

double g_map(double u_prev, double u_curr, double z) {
    const double bracket = 1.0 + 0.5 * u_prev - 1.5 * u_curr;
    const double denom = 1.0 - 0.5 * z * bracket;
    if (denom == 0.0) {
        throw PoleError("g_map: vanishing denominator at z=" + std::to_string(z));
    }
    return (1.0 + 0.5 * z * bracket) / denom * u_curr;
}

namespace {

/// Roots of xi^2 + b xi + c without cancellation.
QuadraticRoots monic_quadratic_roots(cplx b, cplx c) {
    const cplx sq = std::sqrt(b * b - 4.0 * c);
    // Choose the sign so that |b + sign*sq| is maximal.
    const cplx q = -0.5 * (std::real(std::conj(b) * sq) >= 0.0 ? b + sq : b - sq);
    if (q == cplx(0.0, 0.0)) {
        return {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    }
    return {q, c / q};
}

} // namespace

QuadraticRoots char_roots(FixedPoint fp, cplx z) {
    if (fp == FixedPoint::Zero) {
        if (z == cplx(2.0, 0.0)) {
            throw PoleError("char_roots: z = 2 is a pole of the zero-fixed-point polynomial");
        }
        return {cplx(0.0, 0.0), (2.0 + z) / (2.0 - z)};
    }
    return monic_quadratic_roots(-(1.0 - 1.5 * z), -0.5 * z);
}

cplx char_polynomial(FixedPoint fp, cplx z, cplx xi) {
    if (fp == FixedPoint::Zero) {
        return xi * xi - (2.0 + z) / (2.0 - z) * xi;
    }
    return xi * xi - (1.0 - 1.5 * z) * xi - 0.5 * z;
}

StabilitySample stability_sample(FixedPoint fp, cplx z) {
    StabilitySample s;
    s.z = z;
    s.fixed_point = fp;
    try {
        s.roots = char_roots(fp, z);
        s.max_modulus = std::max(std::abs(s.roots[0]), std::abs(s.roots[1]));
    } catch (const PoleError&) {
        const double inf = std::numeric_limits<double>::infinity();
        s.roots = {cplx(inf, 0.0), cplx(inf, 0.0)};
        s.max_modulus = inf;
    }
    s.stable = s.max_modulus <= 1.0;
    return s;
}

StabilityRaster region_raster(FixedPoint fp, Range re, Range im, std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("region_raster: n must be >= 2");
    }
    if (!(re.min < re.max) || !(im.min < im.max)) {
        throw std::invalid_argument("region_raster: empty range");
    }
    StabilityRaster r{fp, re, im, n, {}};
    r.samples.reserve(n * n);
    const double dre = (re.max - re.min) / static_cast<double>(n - 1);
    const double dim = (im.max - im.min) / static_cast<double>(n - 1);
    for (std::size_t row = 0; row < n; ++row) {
        const double y = im.max - static_cast<double>(row) * dim;
        for (std::size_t col = 0; col < n; ++col) {
            const double x = re.min + static_cast<double>(col) * dre;
            r.samples.push_back(stability_sample(fp, cplx(x, y)));
        }
    }
    return r;
}

void write_raster_csv(const StabilityRaster& raster, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "re_z,im_z,max_modulus,stable\n";
    char buf[128];
    for (const auto& s : raster.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", s.z.real(), s.z.imag(), s.max_modulus,
                      s.stable ? 1 : 0);
        out << buf;
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void write_raster_ppm(const StabilityRaster& raster, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "P6\n" << raster.n << ' ' << raster.n << "\n255\n";
    std::vector<unsigned char> pixels;
    pixels.reserve(raster.samples.size() * 3);
    for (const auto& s : raster.samples) {
        const unsigned char v = s.stable ? 0 : 255;
        pixels.insert(pixels.end(), {v, v, v});
    }
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace lvfem
