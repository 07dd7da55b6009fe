#include <doctest.h>

#include "subgeo/builtins.hpp"
#include "subgeo/tangent_bundle.hpp"

using namespace subgeo;

namespace {

Point at(std::initializer_list<double> xs) {
    Point p(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

Vector value_of(const JetVector& v) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i].value();
    return out;
}

MapField field(std::vector<std::string> comps, int n) {
    std::vector<Expr> e;
    for (const auto& c : comps) e.push_back(parse(c, n));
    return map_field(std::move(e), n);
}

std::vector<Point> bundle_samples(const Manifold& base, int count = 12) {
    return sample(tangent_bundle(base).box, count, 21).points;
}

const std::vector<Manifold>& bases() {
    static const std::vector<Manifold> b{euclidean(2), hyperbolic(2), gaussian(1.0)};
    return b;
}

}  // namespace

TEST_CASE("function and vector field lifts on the line") {
    const Point z = at({1.5, -0.4});
    const ScalarField f = scalar_field(parse("x1^2", 1), 1);
    CHECK(vertical_lift(f, z, 0).value() == doctest::Approx(2.25));
    CHECK(complete_lift(f, z, 0).value() == doctest::Approx(2.0 * 1.5 * -0.4));

    const MapField x = field({"x1"}, 1);
    CHECK(inf_norm(value_of(complete_lift(x, z, 0)) - at({1.5, -0.4})) <= 1e-15);
    CHECK(inf_norm(value_of(vertical_lift(x, z, 0)) - at({0.0, 1.5})) <= 1e-15);
    const Manifold line = euclidean(1);
    CHECK(inf_norm(value_of(gamma_operator(line.connection, x, z, 0)) - at({0.0, -0.4})) <= 1e-15);
    CHECK(inf_norm(value_of(horizontal_lift_bundle(line.connection, x, z, 0)) - at({1.5, 0.0})) <= 1e-15);
    const MapField d = field({"1"}, 1);
    CHECK(inf_norm(value_of(gamma_operator(line.connection, d, z, 0))) == 0.0);
}

TEST_CASE("half-plane lifts from the Christoffel table") {
    const Manifold h2 = hyperbolic(2);
    const MapField d1 = field({"1", "0"}, 2);
    // Γ^1_12 = -1 at y = 1: -u^2 Γ^1_12 = +1 in the u^1 slot.
    CHECK(inf_norm(value_of(horizontal_lift_bundle(h2.connection, d1, at({0, 1, 0, 1}), 0)) - at({1, 0, 1, 0})) <= 1e-14);
    // γ(∇∂1) at u = (1, 0): u^j Γ^i_j1 = (Γ^1_11, Γ^2_11) = (0, 1).
    CHECK(inf_norm(value_of(gamma_operator(h2.connection, d1, at({0, 1, 1, 0}), 0)) - at({0, 0, 0, 1})) <= 1e-14);

    const Point z = at({0, 1, 1, 0});
    const Matrix gs = values(lifted_metric(LiftedMetric::Sasaki, h2.metric, h2.connection).eval(z, 0));
    // g^s(∂x1, ∂u1) = u^k Γ^a_1k g_a1 = Γ^1_11 g_11 = 0 and g^s(∂x1, ∂u2) = Γ^2_11 g_22 = 1.
    CHECK(gs(0, 2) == doctest::Approx(0.0));
    CHECK(gs(0, 3) == doctest::Approx(1.0));
}

TEST_CASE("flat lifts") {
    const Manifold flat = euclidean(2);
    const Point z = at({0.3, -0.1, 0.7, 0.2});
    CHECK(inf_norm(values(lifted_metric(LiftedMetric::Sasaki, flat.metric, flat.connection).eval(z, 0)) -
                   Matrix::Identity(4, 4)) == 0.0);
    Matrix gh = Matrix::Zero(4, 4);
    gh.topRightCorner(2, 2) = gh.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
    CHECK(inf_norm(values(lifted_metric(LiftedMetric::Horizontal, flat.metric, flat.connection).eval(z, 0)) - gh) == 0.0);
}

TEST_CASE("defining rules of every lifted object") {
    for (const auto& base : bases()) {
        const auto pts = bundle_samples(base);
        for (auto rule : {LiftRule::Sasaki, LiftRule::HorizontalMetric, LiftRule::CompleteMetric,
                          LiftRule::CompleteConnection, LiftRule::HorizontalConnection, LiftRule::Lifts}) {
            const auto r = check_lift_rules(base, rule, pts, 1e-8);
            INFO(base.name, " ", r.name, " ", r.max_residual);
            CHECK(r.passed());
        }
    }
}

TEST_CASE("complete lift of a torsion-free connection is torsion-free; horizontal lift need not be") {
    const Manifold h2 = hyperbolic(2);
    const auto nc = lifted_connection(LiftedConnection::Complete, h2.connection);
    const auto nh = lifted_connection(LiftedConnection::Horizontal, h2.connection);
    const Point z = at({0.2, 1.3, 0.5, -0.7});
    CHECK(max_abs(torsion(nc, z)) <= 1e-14);
    CHECK(max_abs(torsion(nh, z)) > 1e-3);
}

TEST_CASE("bundle projection propositions") {
    for (const auto& base : bases()) {
        const auto pts = bundle_samples(base);
        CHECK(prop41_check(base, pts, 1e-8).passed());
        CHECK(prop42_check(base, pts, 1e-8).passed());
    }
}

TEST_CASE("statistical tangent bundle biconditional") {
    for (const auto& base : bases()) {
        const auto pts = bundle_samples(base);
        const auto r = tm_statistical_check(base, pts, 1e-7);
        INFO(base.name);
        CHECK(r.passed());
        for (const char* c : {"cst1", "cst2", "cst3", "cst4", "cst5", "cst6"}) CHECK(r.components.at(c) <= 1e-7);
    }
}

TEST_CASE("remarks on lifted statistical structures") {
    for (const auto& base : {euclidean(2), gaussian(1.0)}) {
        const auto rs = remark_checks(base, bundle_samples(base), 1e-8);
        REQUIRE(rs.size() == 3);
        INFO(base.name);
        for (const auto& r : rs) CHECK(r.passed());
    }
    // ∇g ≠ 0 on the Gaussian base: the horizontal lift is not statistical.
    const auto g = remark_checks(gaussian(1.0), bundle_samples(gaussian(1.0)), 1e-8);
    CHECK(g[2].components.at("nabla_g") > 1e-3);
    CHECK(g[2].components.at("statistical") > 1e-3);
    // Curved Levi-Civita base: ∇g = 0 but ∇^H carries torsion from the curvature.
    const auto h = remark_checks(hyperbolic(2), bundle_samples(hyperbolic(2)), 1e-8);
    CHECK(h[0].passed());
    CHECK(h[1].passed());
    CHECK(h[2].status == Status::Fail);
    CHECK(h[2].components.at("nabla_g") <= 1e-12);
}
