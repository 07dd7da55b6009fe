#include <doctest.h>

#include <cmath>
#include <sstream>

#include "subgeo/builtins.hpp"
#include "subgeo/geodesics.hpp"

using namespace subgeo;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

double semicircle_error(double h) {
    const Manifold m = hyperbolic(2);
    const auto tr = integrate_geodesic(m.connection, m.domain, vec({0, 1}), vec({1, 0}), 1.0, h);
    return inf_norm(tr.x.back() - vec({std::tanh(1.0), 1.0 / std::cosh(1.0)}));
}

}  // namespace

TEST_CASE("closed-form geodesics") {
    const Manifold flat = euclidean(2);
    const auto line = integrate_geodesic(flat.connection, flat.domain, vec({0, 0}), vec({1, 1}), 1.0, 1e-3);
    CHECK(inf_norm(line.x.back() - vec({1, 1})) <= 1e-14);
    CHECK(line.nodes() == 1001);

    const Manifold h2 = hyperbolic(2);
    const auto ray = integrate_geodesic(h2.connection, h2.domain, vec({0, 1}), vec({0, 1}), 1.0, 1e-3);
    CHECK(inf_norm(ray.x.back() - vec({0, std::exp(1.0)})) <= 1e-6);
    CHECK(semicircle_error(1e-3) <= 1e-6);
    CHECK(geodesic_residual(h2.connection, ray) <= 1e-6);
    CHECK(energy_drift(h2.metric, ray) <= 1e-6);
}

TEST_CASE("RK4 converges at fourth order") {
    const double ratio = semicircle_error(0.02) / semicircle_error(0.01);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("leaving the domain raises") {
    const Manifold h2 = hyperbolic(2);
    const Box box{{{-1.0, 1.0}, {0.5, 2.0}}};
    CHECK_THROWS_AS(integrate_geodesic(h2.connection, box, vec({0, 1}), vec({0, -3}), 2.0, 1e-3), BoundaryExit);
    CHECK_THROWS_AS(integrate_geodesic(h2.connection, h2.domain, vec({0, -1}), vec({0, 1}), 1.0, 1e-3), BoundaryExit);
    CHECK_THROWS_AS(integrate_geodesic(h2.connection, h2.domain, vec({0, 1}), vec({0, 1}), 1.0, 0.0), ContractViolation);
}

TEST_CASE("stencils and covariant derivatives along curves") {
    std::vector<Vector> f;
    for (int i = 0; i < 11; ++i) f.push_back(vec({std::pow(0.1 * i, 4.0)}));
    const auto d = stencil_derivative(f, 0.1);
    for (int i = 0; i < 11; ++i) CHECK(d[i][0] == doctest::Approx(4.0 * std::pow(0.1 * i, 3.0)).epsilon(1e-10));
    CHECK_THROWS_AS(stencil_derivative(std::vector<Vector>(4, vec({1})), 0.1), ContractViolation);

    const Manifold h2 = hyperbolic(2);
    const auto tr = integrate_geodesic(h2.connection, h2.domain, vec({0, 1}), vec({1, 0}), 1.0, 1e-3);
    const auto e = covariant_along_curve(h2.connection, tr, curve_field(std::vector<Vector>(tr.x.size(), vec({1, 0}))));
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.x.size(); ++i)
        worst = std::max(worst, inf_norm(e.values[i] - contract(levi_civita(h2.metric, tr.x[i]), tr.v[i], vec({1, 0}))));
    CHECK(worst <= 1e-6);

    const Manifold flat = euclidean(2);
    const auto line = integrate_geodesic(flat.connection, flat.domain, vec({0, 0}), vec({1, 2}), 1.0, 0.1);
    const auto c = covariant_along_curve(flat.connection, line, curve_field(std::vector<Vector>(line.x.size(), vec({3, 4}))));
    for (const auto& v : c.values) CHECK(inf_norm(v) <= 1e-12);
}

TEST_CASE("curve decomposition identities") {
    const auto s = hyperbolic_projection(2);
    const auto tr = integrate_geodesic(s.total.connection, s.total.domain, vec({0, 1}), vec({1, 0.5}), 1.0, 1e-3);
    const auto r = sigma_second_residuals(s, tr);
    CHECK(r.horizontal <= 1e-5);
    CHECK(r.vertical <= 1e-5);

    std::vector<Vector> e;
    for (std::size_t i = 0; i < tr.x.size(); ++i) e.push_back(vec({std::sin(tr.t[i]), tr.x[i][0] * tr.x[i][1]}));
    const auto g = curve_decomposition_residuals(s, tr, curve_field(s, tr, e));
    CHECK(g.horizontal <= 1e-5);
    CHECK(g.vertical <= 1e-5);

    const auto s3 = hyperbolic_projection(3);
    const auto t3 = integrate_geodesic(s3.total.connection, s3.total.domain, vec({0, 0, 1}), vec({0.6, -0.3, 0.4}), 1.0, 1e-3);
    const auto r3 = sigma_second_residuals(s3, t3);
    CHECK(r3.horizontal <= 1e-5);
    CHECK(r3.vertical <= 1e-5);
}

TEST_CASE("geodesic projection biconditional") {
    const auto s = hyperbolic_projection(2);
    const auto semicircle = integrate_geodesic(s.total.connection, s.total.domain, vec({0, 1}), vec({1, 0}), 1.0, 1e-3);
    const auto r = geodesic_projection_check(s, semicircle, 1e-5);
    CHECK(r.passed());
    CHECK(r.components.at("condition") > 1e-2);
    CHECK(r.components.at("base_geodesic") > 1e-2);

    const auto ray = integrate_geodesic(s.total.connection, s.total.domain, vec({0.2, 1}), vec({0, 1}), 1.0, 1e-3);
    const auto v = geodesic_projection_check(s, ray, 1e-5);
    CHECK(v.passed());
    CHECK(v.components.at("condition") <= 1e-5);
    CHECK(v.components.at("base_geodesic") <= 1e-5);

    const auto flat = euclidean_projection(2);
    const auto line = integrate_geodesic(flat.total.connection, flat.total.domain, vec({0, 0}), vec({1, 0.3}), 1.0, 1e-3);
    CHECK(geodesic_projection_check(flat, line, 1e-5).passed());
    CHECK(geodesic_projection_check(flat, line, 1e-5).components.at("condition") <= 1e-12);

    // Not a geodesic: premise flagged.
    Trajectory fake = line;
    for (std::size_t i = 0; i < fake.x.size(); ++i) fake.x[i][1] += fake.t[i] * fake.t[i];
    for (std::size_t i = 0; i < fake.x.size(); ++i) fake.v[i][1] += 2.0 * fake.t[i];
    CHECK(geodesic_projection_check(flat, fake, 1e-5).status == Status::PremiseFailed);
}

TEST_CASE("trajectory CSV") {
    const Manifold flat = euclidean(2);
    const auto tr = integrate_geodesic(flat.connection, flat.domain, vec({0, 0}), vec({1, 0.5}), 0.5, 0.25);
    std::ostringstream out;
    write_csv(out, tr);
    CHECK(out.str() == "t,x1,x2,v1,v2\n0,0,0,1,0.5\n0.25,0.25,0.125,1,0.5\n0.5,0.5,0.25,1,0.5\n");
}
