#include <doctest.h>

#include <cmath>

#include "subgeo/fields.hpp"
#include "subgeo/sampling.hpp"

using namespace subgeo;

namespace {

std::vector<std::vector<Expr>> hyperbolic_entries(int n) {
    std::vector<std::vector<Expr>> m(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    const std::string diag = "1/(x" + std::to_string(n) + "^2)";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = parse(i == j ? diag : "0", n);
    return m;
}

}  // namespace

TEST_CASE("jet and finite-difference leaves agree") {
    const auto e = parse("exp(x1)*sin(x2) + x1^3/x2", 2);
    const auto exact = scalar_field(e, 2, DiffMode::Jet);
    const auto fd = scalar_field(e, 2, DiffMode::FiniteDifference);
    const auto pts = sample(Box{{{-1.0, 1.0}, {0.5, 2.0}}}, 16, 3).points;
    for (const auto& p : pts) {
        const auto a = exact.eval(p, 3), b = fd.eval(p, 3);
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(a.d(i) - b.d(i)) <= 1e-8 * (1 + std::abs(a.d(i))));
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(a.d(i, j) - b.d(i, j)) <= 1e-5 * (1 + std::abs(a.d(i, j))));
                for (int k = 0; k < 2; ++k) CHECK(std::abs(a.d(i, j, k) - b.d(i, j, k)) <= 1e-3 * (1 + std::abs(a.d(i, j, k))));
            }
        }
    }
}

TEST_CASE("metric leaves are symmetric and audited") {
    const auto g = metric_field(hyperbolic_entries(3), 3);
    const Point p = Point::Constant(3, 0.8);
    const JetMatrix m = g.eval(p, 2);
    CHECK(m(2, 2).value() == doctest::Approx(1 / 0.64));
    CHECK(m(2, 2).d(2) == doctest::Approx(-2 / (0.8 * 0.8 * 0.8)));
    CHECK(m(0, 1).value() == 0.0);

    const auto pts = sample(Box::cube(3, 0.5, 2.0), 16, 9).points;
    const auto audit = audit_derivatives(flatten(g), pts);
    CHECK(audit.probes == 16);
    CHECK(audit.max_rel_first <= 1e-6);
    CHECK(audit.max_rel_second <= 1e-4);
}

TEST_CASE("order-0 evaluation is plain values") {
    const auto f = map_field({parse("x1*x2", 2), parse("x2", 2)}, 2);
    Point p(2);
    p << 2.0, 3.0;
    const JetVector v = f.eval(p, 0);
    CHECK(v[0].value() == 6.0);
    CHECK(v[1].value() == 3.0);
}

TEST_CASE("connection arithmetic") {
    std::vector<std::vector<std::vector<Expr>>> c(2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2)));
    c[0][0][1] = parse("x1", 2);
    const auto a = christoffel_field(c, 2);
    const auto sum = a + scaled(a, 2.0);
    Point p(2);
    p << 1.5, 0.0;
    const auto v = sum.eval(p, 1);
    CHECK(v(0, 0, 1).value() == doctest::Approx(4.5));
    CHECK(v(0, 0, 1).d(0) == doctest::Approx(3.0));
    CHECK(v(1, 1, 1).value() == 0.0);
}
