#include "subgeo/suite.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <map>

#include <json.hpp>

#include "subgeo/tangent_bundle.hpp"

namespace subgeo {

std::string to_string(DiffMode mode) { return mode == DiffMode::Jet ? "jet" : "fd"; }

const std::vector<CheckInfo>& check_registry() {
    static const std::vector<CheckInfo> registry = [] {
        std::vector<CheckInfo> r = {
            {"affine_hd", "§2 Def 3", "horizontal part of the lifted covariant derivative is the lift of the base one",
             CheckScope::Submersion, kJetTolerance},
            {"conformal_defect", "§3 Def", "conformal horizontal-distribution identity on lifted coordinate fields",
             CheckScope::Conformal, kJetTolerance},
            {"conformal_metric", "§3 Def Eq (9)", "g_M = exp(2 phi) g_B on horizontal vectors", CheckScope::Conformal,
             kJetTolerance},
            {"constant_curvature", "§2 Eq (3)", "R(X,Y)Z = k (g(Y,Z)X - g(X,Z)Y) for a given k", CheckScope::Manifold,
             kJetTolerance},
            {"curvature_duality", "§2 Eq (2)", "g(R(X,Y)Z,W) = -g(Z, dual R(X,Y)W) on a statistical manifold",
             CheckScope::Manifold, kJetTolerance},
            {"curve_decomposition", "§3.1 Theorem",
             "horizontal and vertical parts of E' along each geodesic job", CheckScope::Geodesic, 1e-5},
            {"derivative_audit", "numerical hygiene",
             "jet partials of every leaf field against central differences (relative)", CheckScope::Manifold, 1e-4},
            {"dual_conformal_pair", "§3 Proposition",
             "conformal submersion for the connection iff for its dual, same horizontal distribution",
             CheckScope::Conformal, kJetTolerance},
            {"dual_involution", "§2 Eq (1)", "dual of the dual connection is the connection", CheckScope::Manifold,
             1e-9},
            {"four_conditions", "§3 Theorem", "four conditions on S, T, A, fibers and base versus statisticity",
             CheckScope::Submersion, kJetTolerance},
            {"fundamental_tensors", "§2 Eqs (7)–(8)", "T and A are tensorial and reverse the splitting",
             CheckScope::Submersion, kJetTolerance},
            {"gauss_weingarten", "§2", "Gauss and Weingarten formulae for the fibers", CheckScope::Submersion,
             kJetTolerance},
            {"geodesic_integration", "§3.1", "geodesic equation residual and energy drift of each geodesic job",
             CheckScope::Geodesic, 1e-6},
            {"geodesic_projection", "§3.1 Theorem",
             "projection condition holds iff the projected geodesic is a base geodesic", CheckScope::Geodesic, 1e-5},
            {"induced_statistical", "§2 Theorem 1",
             "induced base connection and metric form a statistical manifold", CheckScope::Submersion, kJetTolerance},
            {"is_statistical", "§2", "torsion-free connection with totally symmetric cubic form",
             CheckScope::Manifold, kJetTolerance},
            {"lemma_components", "§3 Lemma Eqs (cs6)–(cs11)", "component identities cs6 to cs11",
             CheckScope::Submersion, kJetTolerance},
            {"lift_rules_complete_connection", "§4", "defining rules of the complete lift connection",
             CheckScope::Bundle, kJetTolerance},
            {"lift_rules_complete_metric", "§4", "defining rules of the complete lift metric", CheckScope::Bundle,
             kJetTolerance},
            {"lift_rules_horizontal_connection", "§4", "defining rules of the horizontal lift connection",
             CheckScope::Bundle, kJetTolerance},
            {"lift_rules_horizontal_metric", "§4", "defining rules of the horizontal lift metric",
             CheckScope::Bundle, kJetTolerance},
            {"lift_rules_lifts", "§4", "vertical, complete and horizontal lifts of functions and vector fields",
             CheckScope::Bundle, kJetTolerance},
            {"lift_rules_sasaki", "§4", "defining rules of the Sasaki lift metric", CheckScope::Bundle,
             kJetTolerance},
            {"prop41", "§4 Prop 4.1", "TM -> M with the complete lift connection is an affine submersion",
             CheckScope::Bundle, kJetTolerance},
            {"prop42", "§4 Prop 4.2", "TM -> M with the Sasaki metric is a semi-Riemannian submersion",
             CheckScope::Bundle, kJetTolerance},
            {"projectable", "§2 Note", "horizontal part of the lifted covariant derivative is constant along fibers",
             CheckScope::Submersion, kJetTolerance},
            {"remark_complete_metric", "§4 Remarks", "TM with complete lift connection and metric is statistical",
             CheckScope::Bundle, kJetTolerance},
            {"remark_dual_complete_lift", "§4 Remarks", "dual of the complete lift is the complete lift of the dual",
             CheckScope::Bundle, kJetTolerance},
            {"remark_horizontal_connection", "§4 Remarks",
             "TM with horizontal lift connection and Sasaki metric is statistical iff the base has nabla g = 0",
             CheckScope::Bundle, kJetTolerance},
            {"semi_riemannian", "§2 Def 2", "horizontal lifts preserve length", CheckScope::Isometric,
             kJetTolerance},
            {"sigma_second", "§3.1 Corollary Eqs (cg5)–(cg6)", "decomposition of sigma'' along each geodesic job",
             CheckScope::Geodesic, 1e-5},
            {"split", "§2 Def 1 Eq (4)", "vertical and horizontal splitting, projectors and lifts",
             CheckScope::Submersion, kJetTolerance},
            {"tm_statistical", "§4 Theorem", "four conditions versus statisticity of TM with cst1 to cst6",
             CheckScope::Bundle, kJetTolerance},
        };
        std::sort(r.begin(), r.end(), [](const CheckInfo& a, const CheckInfo& b) { return a.name < b.name; });
        return r;
    }();
    return registry;
}

const CheckInfo* find_check(std::string_view name) {
    for (const auto& c : check_registry())
        if (c.name == name) return &c;
    return nullptr;
}

std::string list_checks_text() {
    std::string out;
    for (const auto& c : check_registry()) out += c.name + " [" + c.paper_ref + "]  " + c.description + "\n";
    return out;
}

std::string list_builtins_text() {
    std::string out;
    for (const auto& [name, description] : builtin_catalog()) out += name + "  " + description + "\n";
    return out;
}

namespace {

Manifold build_manifold(const ManifoldSpec& spec, DiffMode mode, std::optional<Builtin>* builtin = nullptr) {
    if (spec.builtin) {
        Builtin b = make_builtin(*spec.builtin, mode);
        Manifold m = b.manifold;
        if (builtin) *builtin = std::move(b);
        return m;
    }
    const InlineManifold& c = spec.chart;
    const int n = c.dim;
    std::vector<std::vector<Expr>> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(i)].push_back(parse(c.metric[i][j], n));
    Manifold m;
    m.name = c.name;
    m.dim = n;
    m.box = c.box;
    m.domain = c.domain;
    m.metric = metric_field(g, n, mode);
    if (c.christoffel.empty()) {
        m.connection = levi_civita(m.metric);
    } else {
        std::vector<std::vector<std::vector<Expr>>> coeffs(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                coeffs[static_cast<std::size_t>(k)].emplace_back();
                for (int j = 0; j < n; ++j)
                    coeffs[static_cast<std::size_t>(k)].back().push_back(parse(c.christoffel[k][i][j], n));
            }
        m.connection = christoffel_field(std::move(coeffs), n, mode);
    }
    return m;
}

std::optional<double> known_curvature(const std::string& name) {
    const auto colon = name.find(':');
    const std::string kind = name.substr(0, colon), arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    if (kind == "euclidean") return 0.0;
    if (kind == "hyperbolic") return -1.0;
    if (kind == "gaussian") {
        double alpha = 0.0;
        std::from_chars(arg.data() + 6, arg.data() + arg.size(), alpha);
        return -(1.0 - alpha * alpha) / 2.0;
    }
    return std::nullopt;
}

}  // namespace

Target build_target(const SuiteConfig& config) {
    std::optional<Builtin> builtin;
    Target t;
    t.manifold = build_manifold(config.manifold, config.mode, &builtin);
    if (config.box) t.manifold.box = *config.box;
    if (config.manifold.builtin) t.curvature = known_curvature(*config.manifold.builtin);

    if (builtin && builtin->bundle_base) {
        t.bundle_base = *builtin->bundle_base;
        if (config.base_box) t.bundle_base.box = *config.base_box;
        if (config.box) t.bundle_box = *config.box;
        else t.bundle_box = t.bundle_base.box * Box::cube(t.bundle_base.dim, -1.0, 1.0);
    } else {
        t.bundle_base = t.manifold;
        t.bundle_box = t.manifold.box * Box::cube(t.manifold.dim, -1.0, 1.0);
    }

    if (config.submersion) {
        const SubmersionSpec& s = *config.submersion;
        const int n = t.manifold.dim;
        Manifold base = build_manifold(s.base, config.mode);
        if (config.base_box) base.box = *config.base_box;
        std::vector<Expr> map;
        for (const auto& e : s.map) map.push_back(parse(e, n));
        HorizontalRule rule = HorizontalRule::MetricOrthogonal;
        MatrixField horizontal;
        if (!s.horizontal.empty()) {
            rule = HorizontalRule::Explicit;
            std::vector<std::vector<Expr>> h;
            for (const auto& row : s.horizontal) {
                h.emplace_back();
                for (const auto& e : row) h.back().push_back(parse(e, n));
            }
            horizontal = matrix_field(std::move(h), n, config.mode);
        }
        std::optional<ScalarField> phi;
        if (s.phi) phi = scalar_field(parse(*s.phi, n), n, config.mode);
        t.submersion = make_submersion(t.manifold.name + "->" + base.name, t.manifold, std::move(base),
                                       map_field(std::move(map), n, config.mode), rule, std::move(horizontal),
                                       std::move(phi));
    } else if (builtin && builtin->submersion) {
        const SubmersionSetup& b = *builtin->submersion;
        Manifold base = b.base;
        if (config.base_box && !builtin->bundle_base) base.box = *config.base_box;
        t.submersion = make_submersion(b.name, t.manifold, std::move(base), b.map, b.rule, b.horizontal, b.phi);
    }
    return t;
}

int Report::count(Status s) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; }));
}

int Report::total_incidents() const {
    int n = 0;
    for (const auto& c : checks) n += c.incidents;
    return n;
}

int Report::total_evaluations() const {
    int n = 0;
    for (const auto& c : checks) n += c.samples + c.incidents;
    return n;
}

double Report::incident_rate() const {
    const int total = total_evaluations();
    return total == 0 ? 0.0 : static_cast<double>(total_incidents()) / total;
}

int Report::exit_code() const {
    if (incident_rate() > 0.1 || count(Status::Error) > 0) return 3;
    if (count(Status::Fail) > 0) return 1;
    return 0;
}

namespace {

struct Context {
    const SuiteConfig& config;
    const Target& target;
    std::vector<Point> points;
    std::vector<Point> bundle_points;
    std::vector<Point> probes;
};

bool applicable(const CheckInfo& info, const Context& ctx) {
    const auto& s = ctx.target.submersion;
    switch (info.scope) {
    case CheckScope::Manifold: return info.name != "constant_curvature" || ctx.target.curvature.has_value();
    case CheckScope::Submersion: return s.has_value();
    case CheckScope::Isometric: return s.has_value() && !s->phi;
    case CheckScope::Conformal: return s.has_value() && s->phi.has_value();
    case CheckScope::Geodesic: return s.has_value() && !ctx.config.geodesics.empty();
    case CheckScope::Bundle: return true;
    }
    return false;
}

CheckResult audit(const Context& ctx, double tol) {
    const Manifold& m = ctx.target.manifold;
    const bool lifted = m.name.starts_with("tangent_bundle_of:");
    CheckResult out;
    out.tolerance = tol;
    auto record = [&](const std::string& name, const DerivativeAudit& a, bool second) {
        out.components[name + "_first"] = a.max_rel_first;
        if (second) out.components[name + "_second"] = a.max_rel_second;
        out.max_residual = std::max({out.max_residual, a.max_rel_first, second ? a.max_rel_second : 0.0});
        out.samples = std::max(out.samples, a.probes);
    };
    record("metric", audit_derivatives(flatten(m.metric), ctx.probes, lifted ? 1 : 2), !lifted);
    record("connection", audit_derivatives(flatten(m.connection), ctx.probes, 1), false);
    if (const auto& s = ctx.target.submersion) {
        record("map", audit_derivatives(flatten(s->map), ctx.probes), true);
        if (s->phi) record("phi", audit_derivatives(flatten(*s->phi), ctx.probes), true);
    }
    out.status = out.max_residual <= tol ? Status::Pass : Status::Fail;
    if (lifted) out.notes.push_back("lifted fields audited at first order");
    return out;
}

CheckResult dual_involution(const Context& ctx, double tol) {
    const Manifold& m = ctx.target.manifold;
    const ConnectionField twice = dual_connection(dual_connection(m.connection, m.metric), m.metric);
    return evaluate_samples("", "", ctx.points, tol, [&](const Point& p, ResidualSink& sink) {
        const Christoffel a = values(m.connection.eval(p, 0)), b = values(twice.eval(p, 0));
        double worst = 0.0;
        for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
        sink.record("coefficients", worst);
    });
}

std::vector<Vector> probe_curve_field(const Trajectory& traj, int n) {
    std::vector<Vector> out;
    for (double t : traj.t) {
        Vector e(n);
        for (int k = 0; k < n; ++k) e[k] = std::cos((k + 1) * t) + 0.5 * k;
        out.push_back(e);
    }
    return out;
}

CheckResult geodesic_check(const CheckInfo& info, const Context& ctx, const GeodesicJob& job, double tol) {
    const SubmersionSetup& s = *ctx.target.submersion;
    const Manifold& m = s.total;
    const Trajectory traj = integrate_geodesic(m.connection, m.domain, job.p0, job.v0, job.t_end, job.h);
    CheckResult out;
    out.tolerance = tol;
    out.samples = traj.nodes();
    if (info.name == "geodesic_integration") {
        out.components["sigma_second"] = geodesic_residual(m.connection, traj);
        out.components["energy_drift"] = energy_drift(m.metric, traj);
        const bool metric = max_abs(nabla_g(m.connection, m.metric, job.p0)) <= 1e-9;
        out.max_residual = metric ? std::max(out.components["sigma_second"], out.components["energy_drift"])
                                  : out.components["sigma_second"];
        if (!metric) out.notes.push_back("connection is not metric; energy drift not checked");
    } else if (info.name == "sigma_second" || info.name == "curve_decomposition") {
        const ResidualPair r = info.name == "sigma_second"
                                   ? sigma_second_residuals(s, traj)
                                   : curve_decomposition_residuals(s, traj, curve_field(s, traj, probe_curve_field(traj, m.dim)));
        out.components["horizontal"] = r.horizontal;
        out.components["vertical"] = r.vertical;
        out.max_residual = std::max(r.horizontal, r.vertical);
    } else {
        return geodesic_projection_check(s, traj, tol);
    }
    out.status = out.max_residual <= tol ? Status::Pass : Status::Fail;
    return out;
}

using Runner = std::function<std::vector<CheckResult>(const CheckInfo&, const Context&, double, std::optional<double>)>;

std::vector<CheckResult> one(CheckResult r) { return {std::move(r)}; }

const std::map<std::string, Runner>& runners() {
    using R = std::vector<CheckResult>;
    static const std::map<std::string, Runner> table = [] {
        std::map<std::string, Runner> t;
        auto sub = [](auto f) {
            return [f](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
                return one(f(*c.target.submersion, c.points, tol));
            };
        };
        auto bundle = [](auto f) {
            return [f](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
                return one(f(c.target.bundle_base, c.bundle_points, tol));
            };
        };
        t["is_statistical"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
            return one(is_statistical(c.target.manifold.connection, c.target.manifold.metric, c.points, tol));
        };
        t["curvature_duality"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
            return one(check_curvature_duality(c.target.manifold.connection, c.target.manifold.metric, c.points, tol));
        };
        t["constant_curvature"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double> k) -> R {
            if (!k) k = c.target.curvature;
            if (!k) {
                CheckResult r;
                r.notes.push_back("no curvature constant given (set \"k\")");
                return one(r);
            }
            auto r = check_constant_curvature(c.target.manifold.connection, c.target.manifold.metric, *k, c.points, tol);
            r.components["k"] = *k;
            return one(r);
        };
        t["derivative_audit"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
            return one(audit(c, tol));
        };
        t["dual_involution"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
            return one(dual_involution(c, tol));
        };
        t["split"] = sub(check_split);
        t["semi_riemannian"] = sub(check_semi_riemannian);
        t["fundamental_tensors"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
            return one(check_tensoriality(*c.target.submersion, c.points, tol, c.config.seed));
        };
        t["gauss_weingarten"] = sub(check_gauss_weingarten);
        t["projectable"] = [](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
            return one(check_projectable(*c.target.submersion, c.points, tol, c.config.fiber_points));
        };
        t["affine_hd"] = sub(check_affine_hd);
        t["induced_statistical"] = sub(theorem21_verify);
        t["conformal_metric"] = sub(check_conformal_metric);
        t["conformal_defect"] = sub(check_conformal_defect);
        t["dual_conformal_pair"] = sub(check_dual_conformal_pair);
        t["lemma_components"] = sub(check_lemma_components);
        t["four_conditions"] = sub(four_conditions_check);
        for (const char* name : {"geodesic_integration", "sigma_second", "curve_decomposition", "geodesic_projection"})
            t[name] = [](const CheckInfo& info, const Context& c, double tol, std::optional<double>) {
                R out;
                for (const auto& job : c.config.geodesics) {
                    CheckResult r;
                    try {
                        r = geodesic_check(info, c, job, tol);
                    } catch (const BoundaryExit& e) {
                        r.status = Status::Error;
                        r.tolerance = tol;
                        r.incidents = 1;
                        r.notes.push_back(std::string("trajectory left the chart domain: ") + e.what());
                    }
                    r.name = info.name + "/" + job.name;
                    out.push_back(std::move(r));
                }
                return out;
            };
        const std::pair<const char*, LiftRule> rules[] = {
            {"lift_rules_sasaki", LiftRule::Sasaki},
            {"lift_rules_horizontal_metric", LiftRule::HorizontalMetric},
            {"lift_rules_complete_metric", LiftRule::CompleteMetric},
            {"lift_rules_complete_connection", LiftRule::CompleteConnection},
            {"lift_rules_horizontal_connection", LiftRule::HorizontalConnection},
            {"lift_rules_lifts", LiftRule::Lifts},
        };
        for (const auto& [name, rule] : rules)
            t[name] = [rule](const CheckInfo&, const Context& c, double tol, std::optional<double>) {
                return one(check_lift_rules(c.target.bundle_base, rule, c.bundle_points, tol));
            };
        t["prop41"] = bundle(prop41_check);
        t["prop42"] = bundle(prop42_check);
        t["tm_statistical"] = bundle(tm_statistical_check);
        for (const char* name : {"remark_complete_metric", "remark_dual_complete_lift", "remark_horizontal_connection"})
            t[name] = [](const CheckInfo& info, const Context& c, double tol, std::optional<double>) -> R {
                for (auto& r : remark_checks(c.target.bundle_base, c.bundle_points, tol))
                    if (r.name == info.name) return one(std::move(r));
                throw ContractViolation("remark check missing: " + info.name);
            };
        return t;
    }();
    return table;
}

std::vector<CheckResult> run_check(const CheckInfo& info, const Context& ctx, std::optional<double> tolerance,
                                   std::optional<double> curvature) {
    double tol = tolerance.value_or(info.tolerance);
    if (!tolerance && ctx.config.mode == DiffMode::FiniteDifference) tol = std::max(tol, kFdTolerance);
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results;
    try {
        results = runners().at(info.name)(info, ctx, tol, curvature);
    } catch (const Error& e) {
        CheckResult r;
        r.status = Status::Error;
        r.incidents = 1;
        r.notes.push_back(e.what());
        results = one(std::move(r));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : results) {
        if (r.name.find('/') == std::string::npos) r.name = info.name;
        r.reference = info.paper_ref;
        r.tolerance = tol;
        r.wall_time_ms = 1e3 * seconds / static_cast<double>(results.size());
    }
    return results;
}

}  // namespace

Report run_suite(const SuiteConfig& config) {
    const Target target = build_target(config);
    Context ctx{config, target, {}, {}, {}};
    ctx.points = sample(target.manifold.box, config.samples, config.seed).points;
    ctx.bundle_points = sample(target.bundle_box, config.samples, config.seed).points;
    ctx.probes = sample(target.manifold.box, config.probes, config.seed ^ 0x9e3779b97f4a7c15ULL).points;

    std::vector<std::pair<const CheckInfo*, CheckRequest>> jobs;
    if (config.all_checks) {
        for (const auto& info : check_registry())
            if (applicable(info, ctx)) jobs.emplace_back(&info, CheckRequest{info.name, std::nullopt, std::nullopt});
    } else {
        for (const auto& req : config.checks) jobs.emplace_back(find_check(req.name), req);
    }

    std::vector<std::future<std::vector<CheckResult>>> running;
    for (const auto& [info, req] : jobs)
        running.push_back(std::async(std::launch::async, [&ctx, info = info, req = req] {
            return run_check(*info, ctx, req.tolerance, req.curvature);
        }));

    Report report;
    report.target = target.manifold.name;
    report.seed = config.seed;
    report.mode = config.mode;
    report.samples = config.samples;
    for (auto& f : running)
        for (auto& r : f.get()) report.checks.push_back(std::move(r));
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return report;
}

std::string report_json(const Report& report, bool wall_time) {
    using nlohmann::ordered_json;
    ordered_json root;
    root["schema_version"] = kReportVersion;
    root["tool"] = "subgeo";
    root["version"] = kToolVersion;
    root["suite"] = {{"target", report.target},
                     {"seed", report.seed},
                     {"mode", to_string(report.mode)},
                     {"samples", report.samples}};
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json components = ordered_json::object();
        for (const auto& [k, v] : c.components) components[k] = v;
        checks.push_back({{"name", c.name},
                          {"paper_ref", c.reference},
                          {"status", to_string(c.status)},
                          {"samples", c.samples},
                          {"incidents", c.incidents},
                          {"max_residual", c.max_residual},
                          {"tolerance", c.tolerance},
                          {"wall_time", wall_time ? c.wall_time_ms / 1e3 : 0.0},
                          {"components", components},
                          {"notes", c.notes}});
    }
    root["checks"] = checks;
    root["summary"] = {{"total", report.checks.size()},
                       {"pass", report.count(Status::Pass)},
                       {"fail", report.count(Status::Fail)},
                       {"inconclusive", report.count(Status::Inconclusive)},
                       {"premise_failed", report.count(Status::PremiseFailed)},
                       {"error", report.count(Status::Error)},
                       {"incident_rate", report.incident_rate()},
                       {"exit_code", report.exit_code()}};
    return root.dump(2) + "\n";
}

Trajectory run_geodesic_job(const SuiteConfig& config, std::string_view job) {
    for (const auto& j : config.geodesics)
        if (j.name == job) {
            const Target t = build_target(config);
            return integrate_geodesic(t.manifold.connection, t.manifold.domain, j.p0, j.v0, j.t_end, j.h);
        }
    std::string names;
    for (const auto& j : config.geodesics) names += (names.empty() ? "" : ", ") + j.name;
    throw ConfigError("unknown geodesic job \"" + std::string(job) + "\"" +
                      (names.empty() ? std::string("; the config defines none") : "; jobs: " + names));
}

}  // namespace subgeo
