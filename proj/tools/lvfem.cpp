// Command-line front end: simulate, equilibria, stability-region, convergence.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvfem/config.hpp"
#include "lvfem/error.hpp"
#include "lvfem/model.hpp"
#include "lvfem/simulation.hpp"
#include "lvfem/stability.hpp"

namespace {

lvfem::Range parse_range(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw lvfem::ConfigError(std::string(flag) + " expects <min:max>, got \"" + text + "\"");
    }
    try {
        std::size_t used = 0;
        lvfem::Range r;
        const std::string lo = text.substr(0, colon);
        const std::string hi = text.substr(colon + 1);
        r.min = std::stod(lo, &used);
        if (used != lo.size()) {
            throw std::invalid_argument(lo);
        }
        r.max = std::stod(hi, &used);
        if (used != hi.size()) {
            throw std::invalid_argument(hi);
        }
        return r;
    } catch (const std::logic_error&) {
        throw lvfem::ConfigError(std::string(flag) + " expects <min:max>, got \"" + text + "\"");
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw lvfem::ConfigError("--dts: cannot parse \"" + item + "\"");
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    lvfem::SimConfig cfg = lvfem::load_config(config_path);
    if (!out_dir.empty()) {
        cfg.output.directory = out_dir;
    }
    const auto result = lvfem::run_simulation(cfg);
    const auto& last = result.diagnostics.back();
    std::cout << "steps=" << result.final_state.step_index << " t=" << fmt(last.t)
              << " snapshots=" << result.snapshots.size() << " out=" << cfg.output.directory.string() << '\n';
    for (int i = 0; i < 3; ++i) {
        std::cout << "u" << (i + 1) << ": mass=" << fmt(last.mass[i]) << " min=" << fmt(last.min[i])
                  << " max=" << fmt(last.max[i]) << '\n';
    }
    return 0;
}

int cmd_equilibria(double a, double b, std::optional<double> alpha) {
    lvfem::ModelParams p;
    p.a = a;
    p.b = b;
    p.alpha = alpha.value_or(a);
    if (!(a > 0.0) || !(b > 0.0) || !(p.alpha > 0.0)) {
        throw lvfem::ConfigError("a, b and alpha must be > 0");
    }
    std::cout << "label,u1,u2,u3,lambda1_re,lambda1_im,lambda2_re,lambda2_im,lambda3_re,lambda3_im,kind\n";
    for (const auto& eq : lvfem::equilibria(p)) {
        std::cout << eq.label << ',' << fmt(eq.point[0]) << ',' << fmt(eq.point[1]) << ',' << fmt(eq.point[2]);
        for (const auto& l : eq.eigenvalues) {
            std::cout << ',' << fmt(l.real()) << ',' << fmt(l.imag());
        }
        std::cout << ',' << lvfem::to_string(eq.kind) << '\n';
    }
    return 0;
}

int cmd_stability(int fixed_point, const std::string& re, const std::string& im, int n, const std::string& out) {
    if (n < 2) {
        throw lvfem::ConfigError("--n must be >= 2");
    }
    const auto raster = lvfem::region_raster(lvfem::fixed_point_from_int(fixed_point), parse_range(re, "--re"),
                                             parse_range(im, "--im"), static_cast<std::size_t>(n));
    std::filesystem::path csv_path(out);
    std::filesystem::path ppm_path = csv_path;
    ppm_path.replace_extension(".ppm");
    if (csv_path.has_parent_path()) {
        std::filesystem::create_directories(csv_path.parent_path());
    }
    lvfem::write_raster_csv(raster, csv_path);
    lvfem::write_raster_ppm(raster, ppm_path);
    std::size_t stable = 0;
    for (const auto& s : raster.samples) {
        stable += s.stable ? 1 : 0;
    }
    std::cout << "samples=" << raster.samples.size() << " stable=" << stable << " csv=" << csv_path.string()
              << " ppm=" << ppm_path.string() << '\n';
    return 0;
}

int cmd_convergence(const std::string& config_path, const std::string& dts_text) {
    const lvfem::SimConfig cfg = lvfem::load_config(config_path);
    const auto rows = lvfem::convergence_study(cfg, parse_list(dts_text));
    std::cout << "dt,error_vs_finest,successive_difference,observed_order\n";
    for (const auto& r : rows) {
        std::cout << fmt(r.dt) << ',' << fmt(r.error_vs_finest) << ',' << fmt(r.successive_difference) << ','
                  << fmt(r.observed_order) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-element simulator for three-species cyclic competition-diffusion"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* simulate = app.add_subcommand("simulate", "Run a simulation from a JSON configuration");
    simulate->add_option("--config", config_path, "Configuration file")->required();
    simulate->add_option("--out", out_dir, "Output directory (overrides the configuration)");

    double a = 0.0, b = 0.0;
    std::optional<double> alpha;
    auto* equil = app.add_subcommand("equilibria", "Print the nonnegative equilibria as CSV");
    equil->add_option("--a", a, "Competition coefficient a")->required();
    equil->add_option("--b", b, "Competition coefficient b")->required();
    equil->add_option("--alpha", alpha, "Override for a31 (defaults to a)");

    int fixed_point = 0, n = 200;
    std::string re = "-10:2", im = "-6:6", raster_out;
    auto* stab = app.add_subcommand("stability-region", "Rasterise the stability region of a fixed point");
    stab->add_option("--fixed-point", fixed_point, "0 or 1")->required()->check(CLI::IsMember({0, 1}));
    stab->add_option("--re", re, "Real range min:max")->capture_default_str();
    stab->add_option("--im", im, "Imaginary range min:max")->capture_default_str();
    stab->add_option("--n", n, "Samples per axis")->capture_default_str();
    stab->add_option("--out", raster_out, "CSV output path; a .ppm is written next to it")->required();

    std::string conv_config, dts;
    auto* conv = app.add_subcommand("convergence", "Temporal self-convergence study");
    conv->add_option("--config", conv_config, "Configuration file")->required();
    conv->add_option("--dts", dts, "Comma-separated, strictly decreasing time steps")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*simulate) {
            return cmd_simulate(config_path, out_dir);
        }
        if (*equil) {
            return cmd_equilibria(a, b, alpha);
        }
        if (*stab) {
            return cmd_stability(fixed_point, re, im, n, raster_out);
        }
        if (*conv) {
            return cmd_convergence(conv_config, dts);
        }
    } catch (const lvfem::Error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
