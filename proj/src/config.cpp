#include "lvfem/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lvfem/error.hpp"

namespace lvfem {

using nlohmann::json;

Point2 InitialConditionConfig::junction_or_default(const Rect& domain) const {
    if (junction) {
        return *junction;
    }
    return {(domain.x_min + 3.0 * domain.x_max) / 4.0, (domain.y_min + 3.0 * domain.y_max) / 4.0};
}

void SimConfig::validate() const {
    if (!(domain.x_min < domain.x_max) || !(domain.y_min < domain.y_max)) {
        throw ConfigError("domain: require x_min < x_max and y_min < y_max");
    }
    if (nx < 2) {
        throw ConfigError("nx must be >= 2");
    }
    if (ny < 2) {
        throw ConfigError("ny must be >= 2");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt must be > 0");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end must be >= 0");
    }
    params.validate();
    solver.validate();
    for (double t : snapshot_times) {
        if (!(t >= 0.0 && t <= t_end)) {
            throw ConfigError("snapshot_times: " + std::to_string(t) + " lies outside [0, t_end]");
        }
    }
    const Point2 j = ic.junction_or_default(domain);
    if (j.x < domain.x_min || j.x > domain.x_max || j.y < domain.y_min || j.y > domain.y_max) {
        throw ConfigError("ic.junction lies outside the domain");
    }
    if (!(ic.width > 0.0)) {
        throw ConfigError("ic.width must be > 0");
    }
}

std::int64_t SimConfig::num_steps() const {
    return static_cast<std::int64_t>(std::floor(t_end / dt + 1e-9));
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(where.empty() ? "configuration must be a JSON object" : where + " must be an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.contains(item.key())) {
            throw ConfigError("unknown key \"" + (where.empty() ? "" : where + ".") + item.key() + "\"");
        }
    }
}

std::string key_path(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double get_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) {
        throw ConfigError("missing required key \"" + key_path(where, key) + "\"");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError("\"" + key_path(where, key) + "\" must be a number");
    }
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const char* key, double fallback) {
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

std::size_t get_count(const json& obj, const char* key) {
    if (!obj.contains(key)) {
        throw ConfigError("missing required key \"" + std::string(key) + "\"");
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("\"" + std::string(key) + "\" must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

bool get_bool_or(const json& obj, const char* key, bool fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_boolean()) {
        throw ConfigError("\"" + std::string(key) + "\" must be true or false");
    }
    return obj.at(key).get<bool>();
}

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

SimConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error at " + line_col(text, e.byte) + ": " + e.what());
    }

    reject_unknown(doc, "",
                   {"domain", "nx", "ny", "dt", "t_end", "params", "ic", "snapshot_times", "output", "solver",
                    "mass_lumping", "paper_literal_stages"});

    SimConfig cfg;
    cfg.source_hash = fnv1a64(text);

    if (!doc.contains("domain")) {
        throw ConfigError("missing required key \"domain\"");
    }
    const json& dom = doc.at("domain");
    reject_unknown(dom, "domain", {"x_min", "x_max", "y_min", "y_max"});
    cfg.domain = {get_number(dom, "domain", "x_min"), get_number(dom, "domain", "x_max"),
                  get_number(dom, "domain", "y_min"), get_number(dom, "domain", "y_max")};

    cfg.nx = get_count(doc, "nx");
    cfg.ny = get_count(doc, "ny");
    cfg.dt = get_number_or(doc, "", "dt", 1.0);
    cfg.t_end = get_number(doc, "", "t_end");

    if (!doc.contains("params")) {
        throw ConfigError("missing required key \"params\"");
    }
    const json& par = doc.at("params");
    reject_unknown(par, "params", {"a", "b", "alpha", "eps2", "eps3"});
    cfg.params.a = get_number(par, "params", "a");
    cfg.params.b = get_number(par, "params", "b");
    cfg.params.alpha = get_number_or(par, "params", "alpha", cfg.params.a);
    cfg.params.eps2 = get_number(par, "params", "eps2");
    cfg.params.eps3 = get_number(par, "params", "eps3");

    if (doc.contains("ic")) {
        const json& ic = doc.at("ic");
        reject_unknown(ic, "ic", {"x_c", "y_c", "theta0", "inside_value", "outside_value", "profile", "width"});
        if (ic.contains("x_c") != ic.contains("y_c")) {
            throw ConfigError("ic: x_c and y_c must be given together");
        }
        if (ic.contains("x_c")) {
            cfg.ic.junction = Point2{get_number(ic, "ic", "x_c"), get_number(ic, "ic", "y_c")};
        }
        cfg.ic.theta0 = get_number_or(ic, "ic", "theta0", 0.0);
        cfg.ic.inside_value = get_number_or(ic, "ic", "inside_value", 1.0);
        cfg.ic.outside_value = get_number_or(ic, "ic", "outside_value", 0.0);
        cfg.ic.width = get_number_or(ic, "ic", "width", 0.5);
        if (ic.contains("profile")) {
            const json& p = ic.at("profile");
            if (p == "sectors") {
                cfg.ic.profile = IcProfile::Sectors;
            } else if (p == "smooth") {
                cfg.ic.profile = IcProfile::Smooth;
            } else {
                throw ConfigError("ic.profile must be \"sectors\" or \"smooth\"");
            }
        }
    }

    if (doc.contains("snapshot_times")) {
        const json& st = doc.at("snapshot_times");
        if (!st.is_array()) {
            throw ConfigError("snapshot_times must be an array of numbers");
        }
        for (const json& t : st) {
            if (!t.is_number()) {
                throw ConfigError("snapshot_times must be an array of numbers");
            }
            cfg.snapshot_times.push_back(t.get<double>());
        }
    }

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        reject_unknown(out, "output", {"directory", "formats"});
        if (out.contains("directory")) {
            if (!out.at("directory").is_string()) {
                throw ConfigError("output.directory must be a string");
            }
            cfg.output.directory = out.at("directory").get<std::string>();
        }
        if (out.contains("formats")) {
            const json& fm = out.at("formats");
            if (!fm.is_array()) {
                throw ConfigError("output.formats must be an array");
            }
            cfg.output.ppm = false;
            cfg.output.csv = false;
            for (const json& f : fm) {
                if (f == "ppm") {
                    cfg.output.ppm = true;
                } else if (f == "csv") {
                    cfg.output.csv = true;
                } else {
                    throw ConfigError("output.formats: unsupported format " + f.dump());
                }
            }
        }
    }

    if (doc.contains("solver")) {
        const json& sv = doc.at("solver");
        reject_unknown(sv, "solver", {"rel_tol", "max_iters", "method"});
        cfg.solver.rel_tol = get_number_or(sv, "solver", "rel_tol", cfg.solver.rel_tol);
        if (sv.contains("max_iters")) {
            if (!sv.at("max_iters").is_number_integer()) {
                throw ConfigError("solver.max_iters must be an integer");
            }
            cfg.solver.max_iters = sv.at("max_iters").get<int>();
        }
        if (sv.contains("method")) {
            if (!sv.at("method").is_string()) {
                throw ConfigError("solver.method must be a string");
            }
            cfg.solver.method = solver_method_from_string(sv.at("method").get<std::string>());
        }
    }

    cfg.mass_lumping = get_bool_or(doc, "mass_lumping", false);
    cfg.paper_literal_stages = get_bool_or(doc, "paper_literal_stages", false);

    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace lvfem
