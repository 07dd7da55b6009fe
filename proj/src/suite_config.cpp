#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "subgeo/suite.hpp"

namespace subgeo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError((path.empty() ? std::string("config") : path) + ": " + what);
}

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) {
            std::string list;
            for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
            fail(at(path, key), "unknown key (expected one of: " + list + ")");
        }
    }
}

double number(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
    }
    fail(path, "expected a number");
}

double finite_number(const json& v, const std::string& path) {
    const double x = number(v, path);
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

double positive(const json& v, const std::string& path) {
    const double x = finite_number(v, path);
    if (!(x > 0.0)) fail(path, "expected a positive number");
    return x;
}

int positive_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1000000)
        fail(path, "expected a positive integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

const json& array(const json& v, const std::string& path, std::size_t size) {
    if (!v.is_array()) fail(path, "expected an array");
    if (v.size() != size)
        fail(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
    return v;
}

std::string expression(const json& v, const std::string& path, int dim) {
    std::string s;
    if (v.is_number()) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        s.assign(buf, r.ptr);
    } else {
        s = text(v, path);
    }
    try {
        parse(s, dim);
    } catch (const SyntaxError& e) {
        fail(path, std::string("bad expression \"") + s + "\": " + e.what());
    }
    return s;
}

Box box(const json& v, const std::string& path, int dim, bool bounded) {
    array(v, path, static_cast<std::size_t>(dim));
    Box b;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = at(path, i);
        array(v[i], p, 2);
        const double lo = bounded ? finite_number(v[i][0], at(p, 0)) : number(v[i][0], at(p, 0));
        const double hi = bounded ? finite_number(v[i][1], at(p, 1)) : number(v[i][1], at(p, 1));
        if (!(lo < hi)) fail(p, "interval must have lo < hi");
        b.intervals.emplace_back(lo, hi);
    }
    return b;
}

Vector vector(const json& v, const std::string& path, int dim) {
    array(v, path, static_cast<std::size_t>(dim));
    Vector out(dim);
    for (int i = 0; i < dim; ++i) out[i] = finite_number(v[static_cast<std::size_t>(i)], at(path, static_cast<std::size_t>(i)));
    return out;
}

int builtin_dim(const std::string& name, const std::string& path) {
    try {
        return make_builtin(name).manifold.dim;
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
}

ManifoldSpec manifold(const json& v, const std::string& path) {
    ManifoldSpec spec;
    if (v.is_string()) {
        spec.builtin = v.get<std::string>();
        spec.chart.dim = builtin_dim(*spec.builtin, path);
        spec.chart.name = *spec.builtin;
        return spec;
    }
    expect_keys(v, path, {"name", "dim", "metric", "connection", "box", "domain"});
    for (const char* key : {"dim", "metric", "box"})
        if (!v.contains(key)) fail(at(path, key), "missing");
    InlineManifold& c = spec.chart;
    c.name = v.contains("name") ? text(v["name"], at(path, "name")) : "inline";
    c.dim = positive_int(v["dim"], at(path, "dim"));
    if (c.dim > 8) fail(at(path, "dim"), "at most 8 coordinates are supported");
    const int n = c.dim;
    const auto& m = array(v["metric"], at(path, "metric"), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::string row = at(at(path, "metric"), static_cast<std::size_t>(i));
        const auto& r = array(m[static_cast<std::size_t>(i)], row, static_cast<std::size_t>(n));
        c.metric.emplace_back();
        for (int j = 0; j < n; ++j)
            c.metric.back().push_back(expression(r[static_cast<std::size_t>(j)], at(row, static_cast<std::size_t>(j)), n));
    }
    if (v.contains("connection")) {
        const json& conn = v["connection"];
        const std::string cp = at(path, "connection");
        if (conn.is_string()) {
            if (conn.get<std::string>() != "levi-civita") fail(cp, "expected \"levi-civita\" or {\"christoffel\": ...}");
        } else {
            expect_keys(conn, cp, {"christoffel"});
            if (!conn.contains("christoffel")) fail(at(cp, "christoffel"), "missing");
            const std::string gp = at(cp, "christoffel");
            const auto& g = array(conn["christoffel"], gp, static_cast<std::size_t>(n));
            c.christoffel.resize(static_cast<std::size_t>(n));
            for (std::size_t k = 0; k < g.size(); ++k) {
                const auto& gk = array(g[k], at(gp, k), static_cast<std::size_t>(n));
                for (std::size_t i = 0; i < gk.size(); ++i) {
                    const auto& gki = array(gk[i], at(at(gp, k), i), static_cast<std::size_t>(n));
                    c.christoffel[k].emplace_back();
                    for (std::size_t j = 0; j < gki.size(); ++j)
                        c.christoffel[k].back().push_back(expression(gki[j], at(at(at(gp, k), i), j), n));
                }
            }
        }
    }
    c.box = box(v["box"], at(path, "box"), n, true);
    c.domain = v.contains("domain") ? box(v["domain"], at(path, "domain"), n, false)
                                    : Box::cube(n, -HUGE_VAL, HUGE_VAL);
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = c.box.intervals[static_cast<std::size_t>(i)];
        const auto [dlo, dhi] = c.domain.intervals[static_cast<std::size_t>(i)];
        if (lo < dlo || hi > dhi) fail(at(path, "box"), "box must lie inside the domain");
    }
    return spec;
}

SubmersionSpec submersion(const json& v, const std::string& path, int n) {
    expect_keys(v, path, {"base", "map", "horizontal", "phi"});
    for (const char* key : {"base", "map"})
        if (!v.contains(key)) fail(at(path, key), "missing");
    SubmersionSpec s;
    s.base = manifold(v["base"], at(path, "base"));
    const int m = s.base.chart.dim;
    if (m >= n) fail(at(path, "base"), "base dimension must be below the total dimension");
    if (s.base.builtin && s.base.builtin->starts_with("tangent_bundle_of"))
        fail(at(path, "base"), "a tangent bundle cannot be a submersion base");
    const std::string mp = at(path, "map");
    const auto& map = array(v["map"], mp, static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < map.size(); ++i) s.map.push_back(expression(map[i], at(mp, i), n));
    if (v.contains("horizontal")) {
        const json& h = v["horizontal"];
        const std::string hp = at(path, "horizontal");
        if (h.is_string()) {
            if (h.get<std::string>() != "metric-orthogonal") fail(hp, "expected \"metric-orthogonal\" or an n x m array");
        } else {
            array(h, hp, static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < h.size(); ++i) {
                const auto& row = array(h[i], at(hp, i), static_cast<std::size_t>(m));
                s.horizontal.emplace_back();
                for (std::size_t j = 0; j < row.size(); ++j)
                    s.horizontal.back().push_back(expression(row[j], at(at(hp, i), j), n));
            }
        }
    }
    if (v.contains("phi")) s.phi = expression(v["phi"], at(path, "phi"), n);
    return s;
}

std::string valid_names() {
    std::string out;
    for (const auto& c : check_registry()) out += (out.empty() ? "" : ", ") + c.name;
    return out;
}

}  // namespace

SuiteConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("config: invalid JSON at byte " + std::to_string(e.byte));
    }
    expect_keys(root, "", {"version", "manifold", "submersion", "checks", "sampling", "mode", "geodesics"});
    SuiteConfig cfg;
    if (root.contains("version") && (!root["version"].is_number_integer() || root["version"].get<int>() != kConfigVersion))
        fail("version", "unsupported config version (expected " + std::to_string(kConfigVersion) + ")");
    if (!root.contains("manifold")) fail("manifold", "missing");
    cfg.manifold = manifold(root["manifold"], "manifold");
    const int n = cfg.manifold.chart.dim;

    std::optional<Builtin> builtin;
    if (cfg.manifold.builtin) builtin = make_builtin(*cfg.manifold.builtin);
    if (root.contains("submersion")) cfg.submersion = submersion(root["submersion"], "submersion", n);

    if (root.contains("mode")) {
        const std::string mode = text(root["mode"], "mode");
        if (mode == "jet") cfg.mode = DiffMode::Jet;
        else if (mode == "fd") cfg.mode = DiffMode::FiniteDifference;
        else fail("mode", "expected \"jet\" or \"fd\"");
    }

    if (root.contains("sampling")) {
        const json& s = root["sampling"];
        expect_keys(s, "sampling", {"count", "seed", "boxes", "probes", "fiber_points"});
        if (s.contains("count")) cfg.samples = positive_int(s["count"], "sampling.count");
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) fail("sampling.seed", "expected a non-negative integer");
            cfg.seed = s["seed"].get<std::uint64_t>();
        }
        if (s.contains("probes")) cfg.probes = positive_int(s["probes"], "sampling.probes");
        if (s.contains("fiber_points")) cfg.fiber_points = positive_int(s["fiber_points"], "sampling.fiber_points");
        if (s.contains("boxes")) {
            const json& b = s["boxes"];
            expect_keys(b, "sampling.boxes", {"total", "base"});
            if (b.contains("total")) cfg.box = box(b["total"], "sampling.boxes.total", n, true);
            if (b.contains("base")) {
                int m = 0;
                if (builtin && builtin->bundle_base) m = builtin->bundle_base->dim;
                else if (cfg.submersion) m = cfg.submersion->base.chart.dim;
                else if (builtin && builtin->submersion) m = builtin->submersion->m();
                else fail("sampling.boxes.base", "the target has no base manifold");
                cfg.base_box = box(b["base"], "sampling.boxes.base", m, true);
            }
        }
    }

    if (root.contains("geodesics")) {
        const json& g = root["geodesics"];
        if (!g.is_array()) fail("geodesics", "expected an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string p = at("geodesics", i);
            expect_keys(g[i], p, {"name", "p0", "v0", "t_end", "h"});
            for (const char* key : {"name", "p0", "v0"})
                if (!g[i].contains(key)) fail(at(p, key), "missing");
            GeodesicJob job;
            job.name = text(g[i]["name"], at(p, "name"));
            if (job.name.empty() || job.name.find_first_of("/ \t\n") != std::string::npos)
                fail(at(p, "name"), "job names must be non-empty without spaces or '/'");
            if (!names.insert(job.name).second) fail(at(p, "name"), "duplicate job name \"" + job.name + "\"");
            job.p0 = vector(g[i]["p0"], at(p, "p0"), n);
            job.v0 = vector(g[i]["v0"], at(p, "v0"), n);
            if (g[i].contains("t_end")) job.t_end = positive(g[i]["t_end"], at(p, "t_end"));
            if (g[i].contains("h")) job.h = positive(g[i]["h"], at(p, "h"));
            cfg.geodesics.push_back(std::move(job));
        }
    }

    if (root.contains("checks")) {
        const json& c = root["checks"];
        if (c.is_string()) {
            if (c.get<std::string>() != "all") fail("checks", "expected \"all\" or an array of checks");
        } else {
            if (!c.is_array()) fail("checks", "expected \"all\" or an array of checks");
            cfg.all_checks = false;
            std::set<std::string> seen;
            for (std::size_t i = 0; i < c.size(); ++i) {
                const std::string p = at("checks", i);
                CheckRequest req;
                if (c[i].is_string()) {
                    req.name = c[i].get<std::string>();
                } else {
                    expect_keys(c[i], p, {"name", "tolerance", "k"});
                    if (!c[i].contains("name")) fail(at(p, "name"), "missing");
                    req.name = text(c[i]["name"], at(p, "name"));
                    if (c[i].contains("tolerance")) req.tolerance = positive(c[i]["tolerance"], at(p, "tolerance"));
                    if (c[i].contains("k")) req.curvature = finite_number(c[i]["k"], at(p, "k"));
                }
                const CheckInfo* info = find_check(req.name);
                if (!info) fail(p, "unknown check \"" + req.name + "\"; valid checks: " + valid_names());
                if (!seen.insert(req.name).second) fail(p, "check \"" + req.name + "\" listed twice");
                const bool has_submersion = cfg.submersion || (builtin && builtin->submersion);
                const bool has_phi = cfg.submersion ? cfg.submersion->phi.has_value()
                                                    : (builtin && builtin->submersion && builtin->submersion->phi);
                const char* missing = nullptr;
                switch (info->scope) {
                case CheckScope::Submersion:
                case CheckScope::Isometric:
                case CheckScope::Geodesic: if (!has_submersion) missing = "a submersion"; break;
                case CheckScope::Conformal: if (!has_submersion || !has_phi) missing = "a conformal factor phi"; break;
                default: break;
                }
                if (!missing && info->scope == CheckScope::Geodesic && cfg.geodesics.empty()) missing = "geodesic jobs";
                if (missing) fail(p, "check \"" + req.name + "\" needs " + missing);
                cfg.checks.push_back(std::move(req));
            }
        }
    }
    return cfg;
}

SuiteConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw ConfigError(path.string() + ": read error");
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace subgeo
