#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lvfem/error.hpp"
#include "lvfem/stability.hpp"

using namespace lvfem;
using cd = std::complex<double>;

namespace {

/// |Pi(xi)| relative to the sum of the magnitudes of its terms.
double relative_residual(FixedPoint fp, cd z, cd xi) {
    const double scale = fp == FixedPoint::Zero
                             ? std::norm(xi) + std::abs((2.0 + z) / (2.0 - z) * xi)
                             : std::norm(xi) + std::abs((1.0 - 1.5 * z) * xi) + std::abs(0.5 * z);
    return scale == 0.0 ? 0.0 : std::abs(char_polynomial(fp, z, xi)) / scale;
}

} // namespace

TEST_CASE("scalar map") {
    for (double z : {-100.0, -3.0, -0.5, 0.0, 0.7, 1.9}) {
        CHECK(g_map(0.0, 0.0, z) == 0.0);
        CHECK(g_map(1.0, 1.0, z) == 1.0);
    }
    CHECK(g_map(0.5, 0.5, -1.0) == doctest::Approx(0.3).epsilon(1e-15));
    // Denominator 1 - z/2 vanishes at z = 2 for the zero state.
    CHECK_THROWS_AS(g_map(0.0, 0.0, 2.0), PoleError);
}

TEST_CASE("linearisation of the map matches the characteristic polynomials") {
    const double d = 1e-6;
    for (double z : {-50.0, -5.0, -1.0, -0.1, 0.3, 1.0}) {
        const double dn0 = (g_map(0.0, d, z) - g_map(0.0, -d, z)) / (2 * d);
        const double dp0 = (g_map(d, 0.0, z) - g_map(-d, 0.0, z)) / (2 * d);
        CHECK(dn0 == doctest::Approx((2 + z) / (2 - z)).epsilon(1e-6));
        CHECK(std::abs(dp0) <= 1e-6);
        const double dn1 = (g_map(1.0, 1.0 + d, z) - g_map(1.0, 1.0 - d, z)) / (2 * d);
        const double dp1 = (g_map(1.0 + d, 1.0, z) - g_map(1.0 - d, 1.0, z)) / (2 * d);
        CHECK(std::abs(dn1 - (1 - 1.5 * z)) <= 1e-6 * std::max(1.0, std::abs(z)));
        CHECK(std::abs(dp1 - 0.5 * z) <= 1e-6 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("characteristic roots") {
    const auto r0 = char_roots(FixedPoint::Zero, cd(-2, 0));
    CHECK(std::abs(r0[0]) == 0.0);
    CHECK(std::abs(r0[1]) == 0.0);
    CHECK_THROWS_AS(char_roots(FixedPoint::Zero, cd(2, 0)), PoleError);

    const auto r1 = char_roots(FixedPoint::One, cd(0, 0));
    CHECK(std::min(std::abs(r1[0]), std::abs(r1[1])) == 0.0);
    CHECK(std::max(std::abs(r1[0]), std::abs(r1[1])) == 1.0);
    CHECK(stability_sample(FixedPoint::One, cd(0, 0)).max_modulus == 1.0);
    CHECK(stability_sample(FixedPoint::One, cd(0, 0)).stable);

    // Textbook quadratic formula for xi^2 - 1.15 xi + 0.05.
    const double bq = 1.15, cq = 0.05;
    const double big = (bq + std::sqrt(bq * bq - 4 * cq)) / 2, small = (bq - std::sqrt(bq * bq - 4 * cq)) / 2;
    const auto r = char_roots(FixedPoint::One, cd(-0.1, 0));
    const double hi = std::max(r[0].real(), r[1].real()), lo = std::min(r[0].real(), r[1].real());
    CHECK(hi == doctest::Approx(big).epsilon(1e-14));
    CHECK(lo == doctest::Approx(small).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.10474).epsilon(1e-5));
    CHECK(lo == doctest::Approx(0.04526).epsilon(1e-4));
}

TEST_CASE("root residuals over the complex plane") {
    for (double x = -100.0; x <= 1.9; x += 0.37) {
        for (double y = -20.0; y <= 20.0; y += 0.53) {
            const cd z(x, y);
            for (FixedPoint fp : {FixedPoint::Zero, FixedPoint::One}) {
                for (cd xi : char_roots(fp, z)) {
                    REQUIRE(relative_residual(fp, z, xi) <= 1e-14);
                }
            }
        }
    }
}

TEST_CASE("real negative axis") {
    for (int k = 0; k < 1000; ++k) {
        const double z = -1e-6 - (100.0 - 1e-6) * k / 999.0;
        REQUIRE(stability_sample(FixedPoint::Zero, cd(z, 0)).max_modulus < 1.0);
        REQUIRE(stability_sample(FixedPoint::One, cd(z, 0)).max_modulus > 1.0);
    }
}

TEST_CASE("raster layout and files") {
    const StabilityRaster r = region_raster(FixedPoint::Zero, {-10, 2}, {-6, 6}, 5);
    CHECK(r.samples.size() == 25);
    CHECK(r.at(0, 0).z == cd(-10, 6));
    CHECK(r.at(4, 4).z == cd(2, -6));
    CHECK(r.at(2, 0).stable);
    CHECK_FALSE(r.at(2, 4).stable);
    CHECK_THROWS_AS(region_raster(FixedPoint::Zero, {-1, 1}, {-1, 1}, 1), std::invalid_argument);

    // The pole at z = 2 is on the grid here.
    const StabilityRaster pole = region_raster(FixedPoint::Zero, {0, 2}, {-1, 1}, 3);
    CHECK(std::isinf(pole.at(1, 2).max_modulus));
    CHECK_FALSE(pole.at(1, 2).stable);

    const auto dir = std::filesystem::temp_directory_path() / "lvfem_stability_test";
    std::filesystem::create_directories(dir);
    write_raster_csv(r, dir / "r.csv");
    write_raster_ppm(r, dir / "r.ppm");
    std::ifstream csv(dir / "r.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "re_z,im_z,max_modulus,stable");
    int lines = 0;
    for (std::string l; std::getline(csv, l);) ++lines;
    CHECK(lines == 25);

    std::ifstream ppm(dir / "r.ppm", std::ios::binary);
    std::stringstream ss;
    ss << ppm.rdbuf();
    const std::string bytes = ss.str();
    const std::string head = "P6\n5 5\n255\n";
    REQUIRE(bytes.size() == head.size() + 75);
    CHECK(bytes.substr(0, head.size()) == head);
    CHECK(static_cast<unsigned char>(bytes[head.size()]) == 0);          // (-10, 6) stable
    CHECK(static_cast<unsigned char>(bytes[head.size() + 12]) == 255);   // (2, 6) unstable
    std::filesystem::remove_all(dir);
}
