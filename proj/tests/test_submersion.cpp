#include <doctest.h>

#include <cmath>

#include "subgeo/builtins.hpp"

using namespace subgeo;

namespace {

Point at(std::initializer_list<double> xs) {
    Point p(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

Vector unit(int n, int i) { return Vector::Unit(n, i); }

// H² with a bent projection x1 + 0.3 x2².
SubmersionSetup bent() {
    Manifold total = hyperbolic(2);
    Manifold base = euclidean(1);
    return make_submersion("bent", total, base, map_field({parse("x1 + 0.3*x2^2", 2)}, 2));
}

SubmersionSetup with_connection(SubmersionSetup s, ConnectionField conn) {
    s.total.connection = std::move(conn);
    return s;
}

ConnectionField bump(int n, int k, int i, int j, const std::string& e) {
    std::vector<std::vector<std::vector<Expr>>> c(static_cast<std::size_t>(n),
        std::vector<std::vector<Expr>>(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n))));
    c[k][i][j] = parse(e, n);
    return christoffel_field(std::move(c), n);
}

std::vector<Point> points(const SubmersionSetup& s, int count = 16) { return sample(s.total.box, count, 11).points; }

}  // namespace

TEST_CASE("split of the half-space projection") {
    const auto s = hyperbolic_projection(3);
    CHECK(s.pivots == std::vector<int>{0, 1});
    CHECK(s.vertical_coords == std::vector<int>{2});
    const auto sp = split(s, at({0.2, -0.4, 1.5}));
    CHECK(inf_norm(sp.vertical - unit(3, 2)) == 0.0);
    Matrix lift = Matrix::Zero(3, 2);
    lift(0, 0) = lift(1, 1) = 1.0;
    CHECK(inf_norm(sp.lift - lift) <= 1e-15);
    CHECK(inf_norm(sp.proj_v - unit(3, 2) * unit(3, 2).transpose()) <= 1e-15);
    CHECK(check_split(s, points(s), 1e-12).passed());
    CHECK(check_semi_riemannian(s, points(s), 1e-12).status == Status::Fail);
}

TEST_CASE("split jets agree with finite differences of the split") {
    const auto s = bent();
    const Point p = at({0.1, 1.3});
    const auto sj = split_jets(s, p, 1);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
        Point a = p, b = p;
        a[i] += h;
        b[i] -= h;
        const Matrix fd = (split(s, a).lift - split(s, b).lift) / (2 * h);
        CHECK(inf_norm(partials(sj.lift, i) - fd) <= 1e-7);
        const Matrix fdv = (split(s, a).vertical - split(s, b).vertical) / (2 * h);
        CHECK(inf_norm(partials(sj.vertical, i) - fdv) <= 1e-7);
    }
}

TEST_CASE("fundamental tensors on the half-space") {
    const auto s = hyperbolic_projection(3);
    const auto& conn = s.total.connection;
    const Point p = at({0.0, 0.0, 1.0});
    CHECK(inf_norm(fundamental_A(s, conn, p, unit(3, 0), unit(3, 0)) - unit(3, 2)) <= 1e-14);
    CHECK(inf_norm(fundamental_A(s, conn, p, unit(3, 0), unit(3, 2)) + unit(3, 0)) <= 1e-14);
    CHECK(inf_norm(fundamental_T(s, conn, p, unit(3, 2), unit(3, 0))) <= 1e-14);
    CHECK(inf_norm(fundamental_T(s, conn, p, unit(3, 2), unit(3, 2))) <= 1e-14);
    CHECK(inf_norm(fundamental_A(s, conn, p, unit(3, 2), unit(3, 0))) == 0.0);
}

TEST_CASE("tensoriality and Gauss-Weingarten splitting") {
    for (const auto& s : {hyperbolic_projection(3), gaussian_projection(1.0), bent()}) {
        CHECK(check_tensoriality(s, points(s), 1e-12, 7).passed());
        CHECK(check_gauss_weingarten(s, points(s), 1e-12).passed());
    }
}

TEST_CASE("conformal structure of the half-space projection") {
    for (int n = 2; n <= 4; ++n) {
        const auto s = hyperbolic_projection(n);
        const auto pts = points(s, 64);
        CHECK(check_conformal_metric(s, pts, 1e-12).passed());
        const auto d = check_conformal_defect(s, pts, 1e-8);
        CHECK(d.passed());
        CHECK(d.max_residual <= 1e-12);
    }
    auto wrong = hyperbolic_projection(2);
    wrong.phi = scalar_field(parse("-2*log(x2)", 2), 2);
    CHECK(check_conformal_metric(wrong, points(wrong), 1e-8).status == Status::Fail);
    auto none = hyperbolic_projection(2);
    none.phi.reset();
    CHECK(check_conformal_metric(none, points(none), 1e-8).status == Status::Inconclusive);
    // dφ vanishes on horizontal lifts here, so the defect does not see φ.
    CHECK(check_conformal_defect(none, points(none), 1e-8).passed());
}

TEST_CASE("affine horizontal distribution and projectability") {
    const auto s = hyperbolic_projection(3);
    CHECK(check_affine_hd(s, points(s), 1e-12).passed());
    const auto pr = check_projectable(s, points(s), 1e-12, 4);
    CHECK(pr.passed());
    const auto b = bent();
    CHECK(check_projectable(b, points(b), 1e-8, 4).status == Status::Fail);
}

TEST_CASE("fibers") {
    const auto s = hyperbolic_projection(3);
    const Point p = at({0.3, 0.1, 1.2});
    const Point q = fiber_point(s, p, at({1.7}));
    CHECK(inf_norm(q - at({0.3, 0.1, 1.7})) == 0.0);
    const auto fc = fiber_chart(s, s.total.connection, p);
    CHECK(fc.metric(0, 0).value() == doctest::Approx(1.0 / 1.44));
    CHECK(fc.metric(0, 0).d(0) == doctest::Approx(-2.0 / (1.2 * 1.2 * 1.2)));
    CHECK(fc.connection(0, 0, 0) == doctest::Approx(-1.0 / 1.2));

    const auto b = bent();
    const Point pb = at({0.2, 1.1});
    const auto fb = fiber_chart(b, b.total.connection, pb);
    CHECK(fb.basis(0, 0) == doctest::Approx(-0.6 * 1.1));
    CHECK(fb.basis(1, 0) == 1.0);
    const Point qb = fiber_point(b, pb, at({0.7}));
    CHECK(project(b, qb)[0] == doctest::Approx(project(b, pb)[0]).epsilon(1e-14));
}

TEST_CASE("jet section matches an explicit section") {
    // Section of x1 + 0.3 x2² with x2 fixed: x1 = b - 0.3 x2².
    const auto s = bent();
    std::vector<JetD> vertical{JetD(1, 3, 1.1)};
    const Point b = at({0.25});
    const auto target = seed_all<double>(std::span<const double>(b.data(), 1), 3);
    const JetVector x = solve_on_fiber(s, vertical, target, at({0.0, 1.1}), 3);
    CHECK(x[0].value() == doctest::Approx(0.25 - 0.3 * 1.21).epsilon(1e-14));
    CHECK(x[0].d(0) == doctest::Approx(1.0));
    CHECK(x[0].d(0, 0) == doctest::Approx(0.0));
    CHECK(x[1].value() == 1.1);
}

TEST_CASE("induced structures") {
    const auto s = hyperbolic_projection(3);
    const auto ind = induced_structures(s, at({0.4, -0.2}), at({0.0, 0.0, 1.25}));
    CHECK(inf_norm(ind.fiber_point - at({0.4, -0.2, 1.25})) <= 1e-15);
    CHECK(inf_norm(ind.metric - Matrix::Identity(2, 2) / (1.25 * 1.25)) <= 1e-14);
    CHECK(max_abs(ind.connection) <= 1e-14);
    for (const auto& sub : {hyperbolic_projection(3), gaussian_projection(0.0), gaussian_projection(1.0),
                            gaussian_projection(-1.0)}) {
        const auto r = theorem21_verify(sub, points(sub), 1e-7);
        CHECK(r.passed());
    }
    const auto broken = with_connection(hyperbolic_projection(2),
                                        hyperbolic_projection(2).total.connection + bump(2, 0, 0, 1, "0.1"));
    CHECK(theorem21_verify(broken, points(broken), 1e-7).status == Status::PremiseFailed);
}

TEST_CASE("lemma components vanish") {
    for (const auto& s : {hyperbolic_projection(3), gaussian_projection(1.0), hyperbolic_projection(4)}) {
        const auto r = check_lemma_components(s, points(s), 1e-8);
        CHECK(r.passed());
        CHECK(r.components.size() == 6);
    }
}

TEST_CASE("dual conformal pair") {
    const auto s = gaussian_projection(1.0);
    const auto r = check_dual_conformal_pair(s, points(s), 1e-8);
    CHECK(r.passed());
    CHECK(r.components.at("primal") <= 1e-8);
    CHECK(r.components.at("dual") <= 1e-8);
}

TEST_CASE("four conditions agree with statisticity") {
    for (const auto& s : {hyperbolic_projection(2), hyperbolic_projection(3), gaussian_projection(1.0),
                          gaussian_projection(-1.0), euclidean_projection(3)}) {
        const auto r = four_conditions_check(s, points(s), 1e-8);
        CHECK(r.passed());
        CHECK(r.max_residual <= 1e-8);
    }
    // Torsion-free perturbation breaks statisticity; the conditions must notice.
    const auto base = hyperbolic_projection(2);
    const auto perturbed = with_connection(base, base.total.connection + bump(2, 1, 0, 0, "0.25"));
    CHECK_FALSE(is_statistical(perturbed.total.connection, perturbed.total.metric, points(perturbed), 1e-8).passed());
    const auto r = four_conditions_check(perturbed, points(perturbed), 1e-8);
    CHECK(r.passed());
    CHECK(r.max_residual > 1e-8);
    // Torsion: premise fails, verdict still agrees.
    const auto twisted = with_connection(base, base.total.connection + bump(2, 0, 0, 1, "0.1"));
    CHECK(four_conditions_check(twisted, points(twisted), 1e-8).passed());
}

TEST_CASE("rank deficient projection is rejected") {
    Manifold total = euclidean(2);
    Manifold base = euclidean(1);
    CHECK_THROWS_AS(make_submersion("flat", total, base, map_field({parse("x1^2 + x2^2", 2)}, 2)), RankDrop);
}
