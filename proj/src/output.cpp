#include "lvfem/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "lvfem/error.hpp"

namespace lvfem {

Diagnostics diagnostics(const SpeciesFields& u, const SparseMatrix& mass, double t) {
    Diagnostics d;
    d.t = t;
    for (std::size_t i = 0; i < 3; ++i) {
        if (u[i].size() != mass.rows()) {
            throw DimensionError("diagnostics: field length does not match the mass matrix");
        }
        const std::vector<double> mu = spmv(mass, u[i]);
        double total = 0.0;
        for (double v : mu) {
            total += v;
        }
        d.mass[i] = total;
        if (u[i].empty()) {
            d.min[i] = d.max[i] = 0.0;
        } else {
            const auto [lo, hi] = std::minmax_element(u[i].begin(), u[i].end());
            d.min[i] = *lo;
            d.max[i] = *hi;
        }
    }
    return d;
}

namespace {

unsigned char to_channel(double v) {
    if (!(v > 0.0)) {
        return 0;
    }
    if (v >= 1.0) {
        return 255;
    }
    return static_cast<unsigned char>(std::lround(255.0 * v));
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

} // namespace

std::vector<unsigned char> encode_ppm(const SpeciesFields& u, const Mesh& mesh) {
    for (const auto& f : u) {
        if (f.size() != mesh.num_nodes()) {
            throw DimensionError("encode_ppm: field length does not match the mesh");
        }
    }
    const std::size_t w = mesh.nx();
    const std::size_t h = mesh.ny();
    const std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.reserve(header.size() + 3 * w * h);
    for (std::size_t r = 0; r < h; ++r) {
        const std::size_t row_base = (h - 1 - r) * w;
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t k = row_base + c;
            bytes.push_back(to_channel(u[2][k]));
            bytes.push_back(to_channel(u[0][k]));
            bytes.push_back(to_channel(u[1][k]));
        }
    }
    return bytes;
}

void write_ppm(const Snapshot& snapshot, const Mesh& mesh, const std::filesystem::path& path) {
    const std::vector<unsigned char> bytes = encode_ppm(snapshot.u, mesh);
    std::ofstream out = open_for_write(path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void write_csv(const Snapshot& snapshot, const Mesh& mesh, const std::filesystem::path& path) {
    for (const auto& f : snapshot.u) {
        if (f.size() != mesh.num_nodes()) {
            throw DimensionError("write_csv: field length does not match the mesh");
        }
    }
    std::ofstream out = open_for_write(path);
    out << "x,y,u1,u2,u3\n";
    char buf[256];
    for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
        const Point2& p = mesh.node(k);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, snapshot.u[0][k],
                      snapshot.u[1][k], snapshot.u[2][k]);
        out << buf;
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

CsvFields read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "x,y,u1,u2,u3") {
        throw IoError(path.string() + ": unexpected CSV header");
    }
    CsvFields out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::array<double, 5> v{};
        const char* p = line.c_str();
        for (std::size_t i = 0; i < v.size(); ++i) {
            char* end = nullptr;
            v[i] = std::strtod(p, &end);
            if (end == p) {
                throw IoError(path.string() + ": malformed number on line " + std::to_string(line_no));
            }
            p = end;
            if (i + 1 < v.size()) {
                if (*p != ',') {
                    throw IoError(path.string() + ": expected ',' on line " + std::to_string(line_no));
                }
                ++p;
            }
        }
        out.nodes.push_back({v[0], v[1]});
        for (std::size_t i = 0; i < 3; ++i) {
            out.u[i].push_back(v[2 + i]);
        }
    }
    return out;
}

std::string diagnostics_csv_header() {
    return "t,mass1,mass2,mass3,min1,min2,min3,max1,max2,max3";
}

std::string diagnostics_csv_row(const Diagnostics& d) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", d.t, d.mass[0],
                  d.mass[1], d.mass[2], d.min[0], d.min[1], d.min[2], d.max[0], d.max[1], d.max[2]);
    return buf;
}

std::string time_label(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

} // namespace lvfem
