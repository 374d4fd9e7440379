#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lvfem/config.hpp"
#include "lvfem/error.hpp"
#include "lvfem/initial_conditions.hpp"
#include "lvfem/output.hpp"
#include "lvfem/simulation.hpp"

using namespace lvfem;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "domain": {"x_min": -2, "x_max": 2, "y_min": -2, "y_max": 2},
  "nx": 9, "ny": 9, "t_end": 4,
  "params": {"a": 1, "b": 2, "eps2": 0.1, "eps3": 0.6}
})";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("lvfem_app_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

SimConfig small_config(const fs::path& out) {
    SimConfig cfg = parse_config(kMinimal);
    cfg.output.directory = out;
    return cfg;
}

} // namespace

TEST_CASE("droplet preset") {
    const SimConfig cfg = load_config(fs::path(LVFEM_PRESET_DIR) / "droplet.json");
    CHECK(cfg.params.a == 1.0);
    CHECK(cfg.params.b == 2.0);
    CHECK(cfg.params.eps2 == 0.1);
    CHECK(cfg.params.eps3 == 0.6);
    CHECK(cfg.dt == 1.0);
    CHECK(cfg.nx == 251);
    CHECK(cfg.source_hash != 0);
    for (const char* name : {"band.json", "spiral.json", "glider.json", "droplet_desk.json", "convergence.json"}) {
        CHECK_NOTHROW(load_config(fs::path(LVFEM_PRESET_DIR) / name));
    }
}

TEST_CASE("config defaults") {
    const SimConfig cfg = parse_config(kMinimal);
    CHECK(cfg.dt == 1.0);
    CHECK(cfg.ic.theta0 == 0.0);
    CHECK(cfg.ic.inside_value == 1.0);
    CHECK(cfg.ic.outside_value == 0.0);
    CHECK_FALSE(cfg.ic.junction.has_value());
    CHECK(cfg.params.alpha == cfg.params.a);
    CHECK_FALSE(cfg.mass_lumping);
    CHECK_FALSE(cfg.paper_literal_stages);
    CHECK(cfg.solver.method == SolverMethod::Iterative);
    CHECK(cfg.num_steps() == 4);

    std::string with_ic = kMinimal;
    with_ic.insert(with_ic.rfind('}'), R"(, "ic": {})");
    const SimConfig c2 = parse_config(with_ic);
    CHECK(c2.ic.theta0 == 0.0);
    CHECK(c2.ic.inside_value == 1.0);
    CHECK(c2.ic.outside_value == 0.0);
}

TEST_CASE("config errors") {
    std::string bad_dt = kMinimal;
    bad_dt.insert(bad_dt.rfind('}'), R"(, "dt": -1)");
    CHECK(config_error(bad_dt).find("dt") != std::string::npos);

    std::string unknown = kMinimal;
    unknown.insert(unknown.rfind('}'), R"(, "colour": "red")");
    CHECK(config_error(unknown).find("colour") != std::string::npos);

    std::string nested = kMinimal;
    nested.insert(nested.rfind('}'), R"(, "solver": {"tol": 1e-8})");
    CHECK(config_error(nested).find("solver.tol") != std::string::npos);

    CHECK(config_error("{\n  \"nx\": ,\n}").find("line 2") != std::string::npos);
    CHECK(config_error(R"({"nx": 4})").find("domain") != std::string::npos);

    std::string outside = kMinimal;
    outside.insert(outside.rfind('}'), R"(, "ic": {"x_c": 5, "y_c": 0})");
    CHECK(config_error(outside).find("junction") != std::string::npos);

    std::string late_snapshot = kMinimal;
    late_snapshot.insert(late_snapshot.rfind('}'), R"(, "snapshot_times": [1, 9])");
    CHECK(config_error(late_snapshot).find("snapshot_times") != std::string::npos);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("triple junction initial condition") {
    const Mesh square = Mesh::structured({-2, 2, -2, 2}, 9, 9);
    InitialConditionConfig ic;
    const Point2 j = ic.junction_or_default(square.domain());
    CHECK(j.x == 1.0);
    CHECK(j.y == 1.0);

    ic.inside_value = 0.9;
    ic.outside_value = 0.05;
    ic.theta0 = 0.4;
    const SpeciesFields u = build_triple_junction_ic(square, ic);
    for (std::size_t k = 0; k < square.num_nodes(); ++k) {
        int inside = 0;
        for (int i = 0; i < 3; ++i) {
            if (u[i][k] == 0.9) ++inside;
            else REQUIRE(u[i][k] == 0.05);
        }
        REQUIRE(inside == 1);
    }

    // Angular shares on a disc centred on the junction.
    const Mesh fine = Mesh::structured({-1, 1, -1, 1}, 401, 401);
    InitialConditionConfig centred;
    centred.junction = Point2{0.0, 0.0};
    const SpeciesFields v = build_triple_junction_ic(fine, centred);
    std::array<double, 3> count{};
    double total = 0.0;
    for (std::size_t k = 0; k < fine.num_nodes(); ++k) {
        if (std::hypot(fine.node(k).x, fine.node(k).y) > 0.95) continue;
        total += 1.0;
        for (int i = 0; i < 3; ++i) count[i] += v[i][k];
    }
    for (double c : count) CHECK(std::abs(c - total / 3.0) < 0.02 * total / 3.0);

    // Sector of a node at 100 degrees from the junction with theta0 = 0 is species 1.
    const Mesh probe = Mesh::structured({-2, 2, -2, 2}, 5, 5);
    InitialConditionConfig plain;
    plain.junction = Point2{0.0, 0.0};
    const SpeciesFields w = build_triple_junction_ic(probe, plain);
    CHECK(w[0][3 * 5 + 2] == 1.0);  // (0, 1): 90 degrees
    CHECK(w[1][2 * 5 + 0] == 1.0);  // (-2, 0): 180 degrees
    CHECK(w[2][1 * 5 + 2] == 1.0);  // (0, -1): 270 degrees

    InitialConditionConfig away;
    away.junction = Point2{3.0, 0.0};
    CHECK_THROWS_AS(build_triple_junction_ic(square, away), ConfigError);
}

TEST_CASE("smooth initial condition") {
    const Mesh m = Mesh::structured({-2, 2, -2, 2}, 33, 33);
    InitialConditionConfig ic;
    ic.profile = IcProfile::Smooth;
    ic.junction = Point2{0.0, 0.0};
    const SpeciesFields u = build_triple_junction_ic(m, ic);
    for (const auto& f : u) {
        for (double v : f) {
            REQUIRE(v > 0.0);
            REQUIRE(v < 1.0);
        }
    }
    // Deep inside sector 1 (bisector at 60 degrees) species 1 is near 1.
    const std::size_t k = 32 * 33 + 26;  // (1.25, 2)
    CHECK(u[0][k] > 0.95);
}

TEST_CASE("PPM encoding") {
    const Mesh m = Mesh::structured({0, 2, 0, 1}, 3, 2);
    Snapshot s;
    s.u = {NodalField{0, 0.2, 0.4, 0.6, 0.8, 1.0}, NodalField{1, 0.8, 0.6, 0.4, 0.2, 0.0},
           NodalField{1.7, -0.3, 0.5, 0.1, 0.0, 0.002}};
    const std::vector<unsigned char> bytes = encode_ppm(s.u, m);
    const std::string header = "P6\n3 2\n255\n";
    // Top image row holds nodes 3..5, then nodes 0..2; RGB = (u3, u1, u2).
    const std::vector<unsigned char> pixels{26, 153, 102, 0, 204, 51, 1, 255, 0,
                                            255, 0, 255, 0, 51, 204, 128, 102, 153};
    std::vector<unsigned char> golden(header.begin(), header.end());
    golden.insert(golden.end(), pixels.begin(), pixels.end());
    CHECK(bytes == golden);

    const fs::path dir = scratch("ppm");
    write_ppm(s, m, dir / "s.ppm");
    const std::string file = slurp(dir / "s.ppm");
    CHECK(std::vector<unsigned char>(file.begin(), file.end()) == golden);

    const Mesh sq = Mesh::structured({0, 1, 0, 1}, 4, 4);
    const std::vector<unsigned char> green = encode_ppm(
        {NodalField(16, 1.0), NodalField(16, 0.0), NodalField(16, 0.0)}, sq);
    const std::vector<unsigned char> black = encode_ppm(constant_fields(sq, 0.0), sq);
    const std::size_t off = std::string("P6\n4 4\n255\n").size();
    for (std::size_t p = 0; p < 16; ++p) {
        CHECK(green[off + 3 * p] == 0);
        CHECK(green[off + 3 * p + 1] == 255);
        CHECK(green[off + 3 * p + 2] == 0);
        CHECK(black[off + 3 * p] == 0);
        CHECK(black[off + 3 * p + 1] == 0);
        CHECK(black[off + 3 * p + 2] == 0);
    }
    CHECK_THROWS_AS(write_ppm(s, m, "/nonexistent/dir/x.ppm"), IoError);
}

TEST_CASE("CSV output") {
    const fs::path dir = scratch("csv");
    const Mesh four = Mesh::structured({0, 1, 0, 1}, 2, 2);
    Snapshot s;
    s.u = constant_fields(four, 0.25);
    write_csv(s, four, dir / "e.csv");
    const std::string text = slurp(dir / "e.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.rfind("x,y,u1,u2,u3\n", 0) == 0);
    CHECK(text.find("1,1,0.25,0.25,0.25\n") != std::string::npos);

    const Mesh m = Mesh::structured({-2, 2, -2, 2}, 7, 5);
    Snapshot r;
    for (int i = 0; i < 3; ++i) {
        r.u[i].resize(m.num_nodes());
        for (std::size_t k = 0; k < m.num_nodes(); ++k) r.u[i][k] = std::sin(1.0 + k * 0.37 + i) / 3.0;
    }
    write_csv(r, m, dir / "r.csv");
    const CsvFields back = read_csv(dir / "r.csv");
    for (int i = 0; i < 3; ++i) CHECK(back.u[i] == r.u[i]);
    for (std::size_t k = 0; k < m.num_nodes(); ++k) {
        CHECK(back.nodes[k].x == m.node(k).x);
        CHECK(back.nodes[k].y == m.node(k).y);
    }
}

TEST_CASE("diagnostics") {
    const Mesh m = Mesh::structured({-2, 2, -2, 2}, 11, 11);
    const SparseMatrix mass = assemble_mass(m);
    const Diagnostics d = diagnostics(constant_fields(m, 0.3), mass, 2.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(d.mass[i] - 16 * 0.3) <= 1e-12);
        CHECK(d.min[i] == 0.3);
        CHECK(d.max[i] == 0.3);
    }
    const Diagnostics z = diagnostics(constant_fields(m, 0.0), mass);
    for (int i = 0; i < 3; ++i) {
        CHECK(z.mass[i] == 0.0);
        CHECK(z.max[i] == 0.0);
    }
    CHECK(time_label(150.0) == "150");
    CHECK(time_label(0.5) == "0.5");
}

TEST_CASE("snapshot scheduling") {
    CHECK(snapshot_step(0.0, 1.0) == 0);
    CHECK(snapshot_step(3.0, 1.0) == 3);
    CHECK(snapshot_step(2.95, 0.3) == 9);
    CHECK(snapshot_step(0.3, 0.1) == 3);

    const fs::path dir = scratch("sched");
    SimConfig cfg = small_config(dir);
    cfg.dt = 0.3;
    cfg.t_end = 3.0;
    cfg.snapshot_times = {0.0, 0.5, 1.0, 2.95, 3.0};
    const SimulationResult res = run_simulation(cfg);
    REQUIRE(res.snapshots.size() == cfg.snapshot_times.size());
    for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
        const Snapshot& snap = res.snapshots[s];
        CHECK(snap.t_requested == cfg.snapshot_times[s]);
        CHECK(snap.t <= snap.t_requested + 1e-12);
        CHECK(snap.t_requested - snap.t < cfg.dt);
        CHECK(snap.config_hash == cfg.source_hash);
        CHECK(fs::exists(dir / ("snapshot_t" + time_label(snap.t_requested) + ".ppm")));
        CHECK(fs::exists(dir / ("snapshot_t" + time_label(snap.t_requested) + ".csv")));
    }
    CHECK(res.diagnostics.size() == 11);
    CHECK(fs::exists(dir / "diagnostics.csv"));
}

TEST_CASE("constant runs") {
    SUBCASE("coexistence state") {
        SimConfig cfg = small_config(scratch("econst"));
        cfg.ic.inside_value = cfg.ic.outside_value = 0.25;
        cfg.t_end = 20;
        RunOptions opt;
        opt.write_files = false;
        const SimulationResult res = run_simulation(cfg, opt);
        const Diagnostics& d0 = res.diagnostics.front();
        for (const auto& d : res.diagnostics) {
            for (int i = 0; i < 3; ++i) {
                REQUIRE(std::abs(d.mass[i] - d0.mass[i]) <= 1e-8);
                REQUIRE(std::abs(d.min[i] - d0.min[i]) <= 1e-8);
                REQUIRE(std::abs(d.max[i] - d0.max[i]) <= 1e-8);
            }
        }
    }
    SUBCASE("extinction state") {
        SimConfig cfg = small_config(scratch("zero"));
        cfg.ic.inside_value = cfg.ic.outside_value = 0.0;
        const SimulationResult res = run_simulation(cfg, {false});
        for (const auto& f : res.final_state.u_curr)
            for (double v : f) REQUIRE(v == 0.0);
    }
}

TEST_CASE("runs are deterministic") {
    const fs::path d1 = scratch("det1"), d2 = scratch("det2");
    SimConfig c1 = small_config(d1);
    c1.snapshot_times = {4.0};
    SimConfig c2 = c1;
    c2.output.directory = d2;
    run_simulation(c1);
    run_simulation(c2);
    CHECK(slurp(d1 / "snapshot_t4.csv") == slurp(d2 / "snapshot_t4.csv"));
    CHECK(slurp(d1 / "diagnostics.csv") == slurp(d2 / "diagnostics.csv"));
    CHECK(slurp(d1 / "snapshot_t4.csv").size() > 100);
}

TEST_CASE("convergence study arguments") {
    SimConfig cfg = small_config(scratch("conv"));
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(convergence_study(cfg, {0.5, 0.25}), ConfigError);
    CHECK_THROWS_AS(convergence_study(cfg, {0.5, 0.5, 0.25}), ConfigError);
    CHECK_THROWS_AS(convergence_study(cfg, {0.5, 0.3, 0.1}), ConfigError);
    const auto rows = convergence_study(cfg, {0.25, 0.125, 0.0625});
    REQUIRE(rows.size() == 3);
    CHECK(rows.back().error_vs_finest == 0.0);
    CHECK(rows[0].error_vs_finest > rows[1].error_vs_finest);
}

TEST_CASE("heat equation converges at second order in space") {
    // u = cos x cos y exp(-2t) solves u_t = lap u with zero normal flux on [0, pi]^2.
    const double t_end = 0.5, dt = 0.005;
    std::vector<double> errors;
    for (std::size_t n : {9, 17, 33}) {
        const Discretization disc = Discretization::build(Mesh::structured({0, std::numbers::pi, 0, std::numbers::pi}, n, n));
        NodalField u0(disc.mesh.num_nodes());
        for (std::size_t k = 0; k < u0.size(); ++k) u0[k] = std::cos(disc.mesh.node(k).x) * std::cos(disc.mesh.node(k).y);
        SpeciesState s = SpeciesState::bootstrap({u0, u0, u0});
        StepOptions opt;
        opt.growth = false;
        SolverConfig solver;
        solver.rel_tol = 1e-13;
        for (int k = 0; k < static_cast<int>(std::lround(t_end / dt)); ++k) {
            s = step(s, disc, ModelParams{}, dt, solver, opt);
        }
        NodalField err(u0.size());
        for (std::size_t k = 0; k < err.size(); ++k) err[k] = s.u_curr[0][k] - u0[k] * std::exp(-2 * t_end);
        errors.push_back(std::sqrt(dot(err, spmv(disc.mass, err))));
    }
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        const double order = std::log2(errors[k] / errors[k + 1]);
        CHECK(order > 1.8);
        CHECK(order < 2.5);
    }
}
