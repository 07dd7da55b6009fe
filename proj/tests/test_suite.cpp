#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "subgeo/suite.hpp"

using namespace subgeo;

namespace {

const CheckResult* find(const Report& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kInlineH3 = R"json({
  "manifold": {
    "dim": 3,
    "metric": [["1/(x3^2)", 0, 0], [0, "1/(x3^2)", 0], [0, 0, "1/(x3^2)"]],
    "box": [[-1, 1], [-1, 1], [0.5, 2]],
    "domain": [["-inf", "inf"], ["-inf", "inf"], [0, "inf"]]
  },
  "submersion": {
    "base": "euclidean:2",
    "map": ["x1", "x2"],
    "phi": "-log(x3)"
  },
  "sampling": {"count": 24, "seed": 5}
})json";

}  // namespace

TEST_CASE("minimal builtin config is valid") {
    const SuiteConfig c = parse_config(R"({"manifold": "euclidean:2", "checks": ["is_statistical"]})");
    CHECK(c.manifold.builtin == "euclidean:2");
    CHECK_FALSE(c.all_checks);
    REQUIRE(c.checks.size() == 1);
    CHECK(c.checks[0].name == "is_statistical");
    CHECK(c.samples == 64);
    CHECK(c.mode == DiffMode::Jet);
}

TEST_CASE("unknown check lists the valid names") {
    const std::string e = error_of(R"({"manifold": "euclidean:2", "checks": ["frobnicate"]})");
    CHECK(e.find("checks[0]") != std::string::npos);
    CHECK(e.find("frobnicate") != std::string::npos);
    CHECK(e.find("geodesic_projection") != std::string::npos);
    CHECK(e.find("is_statistical") != std::string::npos);
}

TEST_CASE("config errors carry a location") {
    CHECK(error_of(R"({"manifold": "euclidean:2", "colour": 1})").starts_with("colour: unknown key"));
    CHECK(error_of(R"({"manifold": "sphere:2"})").starts_with("manifold: unknown builtin"));
    CHECK(error_of(R"({"manifold": "tangent_bundle_of:tangent_bundle_of:euclidean:1"})").find("nested") !=
          std::string::npos);
    CHECK(error_of("{\"manifold\": ").find("invalid JSON") != std::string::npos);

    const std::string bad = error_of(R"({"manifold": {"dim": 2, "metric": [["1", "x1 * (x2"], ["0", "1"]],
                                                      "box": [[0, 1], [0, 1]]}})");
    CHECK(bad.starts_with("manifold.metric[0][1]: bad expression"));
    CHECK(bad.find("at offset") != std::string::npos);
    CHECK(error_of(R"({"manifold": {"dim": 2, "metric": [["1", "x3"], ["0", "1"]], "box": [[0, 1], [0, 1]]}})")
              .starts_with("manifold.metric[0][1]"));

    CHECK(error_of(R"({"manifold": "euclidean:2", "sampling": {"boxes": {"total": [[0, 1]]}}})")
              .starts_with("sampling.boxes.total: expected 2 entries"));
    CHECK(error_of(R"({"manifold": "euclidean:2", "sampling": {"boxes": {"total": [[1, 0], [0, 1]]}}})")
              .starts_with("sampling.boxes.total[0]"));
    CHECK(error_of(R"({"manifold": "euclidean:2", "mode": "symbolic"})").starts_with("mode:"));
    CHECK(error_of(R"({"manifold": "euclidean:2", "geodesics": [{"name": "a", "p0": [0], "v0": [1, 0]}]})")
              .starts_with("geodesics[0].p0"));
    CHECK(error_of(R"({"manifold": "euclidean:2", "checks": ["conformal_defect"]})").find("phi") !=
          std::string::npos);
    CHECK(error_of(R"({"manifold": "euclidean:2", "checks": ["sigma_second"]})").find("geodesic jobs") !=
          std::string::npos);
    CHECK(error_of(R"({"manifold": "euclidean:2", "checks": ["split", "split"]})").find("twice") !=
          std::string::npos);
}

TEST_CASE("load_config reports missing files") {
    CHECK_THROWS_AS(load_config("/nonexistent/suite.json"), ConfigError);
}

TEST_CASE("check registry is alphabetical with anchors") {
    const auto& r = check_registry();
    CHECK(std::is_sorted(r.begin(), r.end(), [](const CheckInfo& a, const CheckInfo& b) { return a.name < b.name; }));
    const std::string text = list_checks_text();
    CHECK(text.find("geodesic_projection [§3.1 Theorem]") != std::string::npos);
    for (const auto& c : r) CHECK_FALSE(c.description.empty());

    const std::string builtins = list_builtins_text();
    std::vector<std::string> lines;
    for (std::size_t at = 0; at < builtins.size();) {
        const auto end = builtins.find('\n', at);
        lines.push_back(builtins.substr(at, end - at));
        at = end + 1;
    }
    CHECK(std::is_sorted(lines.begin(), lines.end()));
    for (const char* name : {"hyperbolic:n", "euclidean:n", "gaussian:alpha=A", "tangent_bundle_of:<builtin>"})
        CHECK(builtins.find(name) != std::string::npos);
}

TEST_CASE("inline hyperbolic 3-space matches the builtin") {
    SuiteConfig inline_cfg = parse_config(kInlineH3);
    SuiteConfig builtin_cfg = parse_config(R"({"manifold": "hyperbolic:3", "sampling": {"count": 24, "seed": 5}})");
    const Report a = run_suite(inline_cfg), b = run_suite(builtin_cfg);
    int compared = 0;
    for (const auto& c : a.checks) {
        const CheckResult* d = find(b, c.name);
        REQUIRE(d != nullptr);
        CHECK_MESSAGE(c.status == d->status, c.name);
        CHECK_MESSAGE(std::abs(c.max_residual - d->max_residual) <= 1e-9 * (1.0 + std::abs(d->max_residual)), c.name);
        ++compared;
    }
    CHECK(compared >= 25);

    const Target t = build_target(inline_cfg), u = build_target(builtin_cfg);
    for (const auto& p : sample(t.manifold.box, 8, 2).points) {
        CHECK(inf_norm(values(t.manifold.metric.eval(p, 0)) - values(u.manifold.metric.eval(p, 0))) <= 1e-15);
        CHECK(max_abs(values(t.manifold.connection.eval(p, 0))) ==
              doctest::Approx(max_abs(values(u.manifold.connection.eval(p, 0)))).epsilon(1e-14));
        CHECK(t.submersion->phi->eval(p, 0).value() == doctest::Approx(u.submersion->phi->eval(p, 0).value()));
    }
}

TEST_CASE("broken connection fails is_statistical with a nonzero residual") {
    const Report r = run_suite(parse_config(R"({
      "manifold": {"dim": 2, "metric": [[1, 0], [0, 1]],
                   "connection": {"christoffel": [[[0, "0.3*x2"], [0, 0]], [[0, 0], [0, 0]]]},
                   "box": [[-1, 1], [-1, 1]]},
      "checks": ["is_statistical", "dual_involution"]})"));
    const CheckResult* s = find(r, "is_statistical");
    REQUIRE(s != nullptr);
    CHECK(s->status == Status::Fail);
    CHECK(s->max_residual > 0.1);
    CHECK(find(r, "dual_involution")->passed());
    CHECK(r.exit_code() == 1);
}

TEST_CASE("gaussian alpha = 1 suite passes including the horizontal-lift remark") {
    const Report r = run_suite(parse_config(R"({"manifold": "gaussian:alpha=1", "sampling": {"count": 32}})"));
    for (const auto& c : r.checks) CHECK_MESSAGE(c.passed(), c.name);
    CHECK(find(r, "remark_horizontal_connection") != nullptr);
    CHECK(find(r, "is_statistical")->passed());
    CHECK(find(r, "four_conditions")->passed());
    CHECK(r.exit_code() == 0);
}

TEST_CASE("constant curvature uses the builtin constant") {
    for (const char* name : {"gaussian:alpha=0.5", "hyperbolic:2", "euclidean:3"}) {
        const Report r = run_suite(parse_config(std::string(R"({"manifold": ")") + name +
                                                R"(", "checks": ["constant_curvature"], "sampling": {"count": 16}})"));
        CHECK_MESSAGE(r.checks.at(0).passed(), name);
    }
    const Report wrong = run_suite(parse_config(
        R"({"manifold": "hyperbolic:2", "checks": [{"name": "constant_curvature", "k": 1}], "sampling": {"count": 8}})"));
    CHECK(wrong.checks.at(0).status == Status::Fail);
    const Report none = run_suite(parse_config(R"({"manifold": {"dim": 1, "metric": [[1]], "box": [[0, 1]]},
                                                  "checks": ["constant_curvature"], "sampling": {"count": 4}})"));
    CHECK(none.checks.at(0).status == Status::Inconclusive);
}

TEST_CASE("tolerance overrides apply per check") {
    const Report r = run_suite(parse_config(R"({"manifold": "hyperbolic:2",
        "checks": [{"name": "is_statistical", "tolerance": 1e-3}, "split"], "sampling": {"count": 8}})"));
    CHECK(find(r, "is_statistical")->tolerance == 1e-3);
    CHECK(find(r, "split")->tolerance == kJetTolerance);
    CHECK(find(r, "split")->reference == "§2 Def 1 Eq (4)");
}

TEST_CASE("tangent bundle builtins run bundle checks over their base") {
    const Report r = run_suite(parse_config(R"({"manifold": "tangent_bundle_of:euclidean:2",
        "checks": ["prop41", "prop42", "tm_statistical", "semi_riemannian", "is_statistical"],
        "sampling": {"count": 16}})"));
    for (const auto& c : r.checks) CHECK_MESSAGE(c.passed(), c.name);
    const Target t = build_target(parse_config(R"({"manifold": "tangent_bundle_of:hyperbolic:2"})"));
    CHECK(t.manifold.dim == 4);
    CHECK(t.bundle_base.dim == 2);
    CHECK(t.submersion.has_value());
}

TEST_CASE("geodesic jobs produce one result per job") {
    const SuiteConfig c = parse_config(R"({"manifold": "hyperbolic:2",
        "checks": ["geodesic_integration", "geodesic_projection"],
        "geodesics": [{"name": "semicircle", "p0": [0, 1], "v0": [1, 0]},
                      {"name": "vertical", "p0": [0, 1], "v0": [0, 1]}]})");
    const Report r = run_suite(c);
    REQUIRE(r.checks.size() == 4);
    CHECK(r.checks[0].name == "geodesic_integration/semicircle");
    CHECK(r.checks[3].name == "geodesic_projection/vertical");
    for (const auto& x : r.checks) CHECK_MESSAGE(x.passed(), x.name);
    CHECK(r.checks[0].reference == "§3.1");

    const Trajectory traj = run_geodesic_job(c, "semicircle");
    CHECK(traj.x.back()[0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
    CHECK(traj.x.back()[1] == doctest::Approx(1.0 / std::cosh(1.0)).epsilon(1e-9));
    CHECK_THROWS_AS(run_geodesic_job(c, "missing"), ConfigError);
}

TEST_CASE("trajectories leaving the domain are reported as errors, not thrown") {
    const Report r = run_suite(parse_config(R"({
      "manifold": {"dim": 2, "metric": [[1, 0], [0, 1]], "box": [[-1, 1], [-1, 1]], "domain": [[-2, 2], [-2, 2]]},
      "submersion": {"base": "euclidean:1", "map": ["x1"]},
      "checks": ["geodesic_integration", "split"],
      "geodesics": [{"name": "out", "p0": [0, 0], "v0": [1, 0], "t_end": 3}]})"));
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].name == "geodesic_integration/out");
    CHECK(r.checks[0].status == Status::Error);
    CHECK(r.checks[1].passed());
    CHECK(r.exit_code() == 3);
}

TEST_CASE("reports are deterministic apart from wall time") {
    const SuiteConfig c = parse_config(R"({"manifold": "hyperbolic:3", "sampling": {"count": 16, "seed": 11}})");
    const std::string a = report_json(run_suite(c), false), b = report_json(run_suite(c), false);
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": 1") != std::string::npos);
    CHECK(a.find("\"paper_ref\": \"§2 Def 3\"") != std::string::npos);
    for (const char* key : {"\"name\"", "\"samples\"", "\"max_residual\"", "\"tolerance\"", "\"status\"",
                            "\"wall_time\"", "\"seed\": 11", "\"mode\": \"jet\"", "\"version\""})
        CHECK_MESSAGE(a.find(key) != std::string::npos, key);

    SuiteConfig other = c;
    other.seed = 12;
    CHECK(report_json(run_suite(other), false) != a);
}

TEST_CASE("finite-difference mode runs with its own tolerance") {
    SuiteConfig c = parse_config(R"({"manifold": "hyperbolic:2", "mode": "fd", "sampling": {"count": 16},
        "checks": ["is_statistical", "conformal_defect", "four_conditions", "derivative_audit"]})");
    const Report r = run_suite(c);
    for (const auto& x : r.checks) {
        CHECK_MESSAGE(x.passed(), x.name);
        CHECK(x.tolerance >= kFdTolerance);
    }
    CHECK(report_json(r).find("\"mode\": \"fd\"") != std::string::npos);
}

TEST_CASE("exit code contract") {
    Report r;
    r.checks.resize(3);
    for (auto& c : r.checks) {
        c.status = Status::Pass;
        c.samples = 10;
    }
    CHECK(r.exit_code() == 0);
    r.checks[1].status = Status::PremiseFailed;
    r.checks[2].status = Status::Inconclusive;
    CHECK(r.exit_code() == 0);
    r.checks[0].status = Status::Fail;
    CHECK(r.exit_code() == 1);
    r.checks[2].incidents = 4;
    CHECK(r.incident_rate() == doctest::Approx(4.0 / 34.0));
    CHECK(r.exit_code() == 3);
}
