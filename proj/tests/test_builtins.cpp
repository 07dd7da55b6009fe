#include <doctest.h>

#include "subgeo/builtins.hpp"

using namespace subgeo;

namespace {

double max_diff(const CubicForm& a, const CubicForm& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_CASE("Gaussian skewness closed form matches the log-partition function") {
    for (const auto& p : sample(Box{{{-1.0, 1.0}, {0.5, 2.0}}}, 16, 3).points) {
        CHECK(max_diff(gaussian_skewness(p), gaussian_skewness_from_potential(p)) <= 1e-10);
        CHECK(inf_norm(fisher_from_potential(p) - values(fisher_metric().eval(p, 0))) <= 1e-12);
    }
}

TEST_CASE("Gaussian alpha-connection has cubic form alpha T") {
    for (double alpha : {-1.0, 0.0, 0.5, 1.0}) {
        const Manifold m = gaussian(alpha);
        for (const auto& p : sample(m.box, 8, 1).points) {
            const CubicForm c = nabla_g(m.connection, m.metric, p);
            const CubicForm t = gaussian_skewness(p);
            double worst = 0.0;
            for (std::size_t i = 0; i < c.data().size(); ++i)
                worst = std::max(worst, std::abs(c.data()[i] - alpha * t.data()[i]));
            CHECK(worst <= 1e-12);
        }
        CHECK(is_statistical(m.connection, m.metric, sample(m.box, 16, 2).points, 1e-10).passed());
    }
}

TEST_CASE("alpha and -alpha connections are dual") {
    const auto p = sample(Box{{{-1.0, 1.0}, {0.5, 2.0}}}, 8, 9).points;
    const auto dual = dual_connection(gaussian_alpha_connection(1.0), fisher_metric());
    const auto minus = gaussian_alpha_connection(-1.0);
    for (const auto& x : p) {
        const auto a = values(dual.eval(x, 0)), b = values(minus.eval(x, 0));
        for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(a.data()[i] == doctest::Approx(b.data()[i]).epsilon(1e-12));
    }
}

TEST_CASE("e-connection of the normal family is flat") {
    const Manifold m = gaussian(1.0);
    CHECK(check_constant_curvature(m.connection, m.metric, 0.0, sample(m.box, 16, 4).points, 1e-9).passed());
}

TEST_CASE("builtin names") {
    CHECK(make_builtin("euclidean:3").manifold.dim == 3);
    CHECK_FALSE(make_builtin("euclidean:1").submersion.has_value());
    CHECK(make_builtin("hyperbolic:4").submersion->m() == 3);
    CHECK(make_builtin("gaussian:alpha=-0.5").manifold.name == "gaussian:alpha=-0.5");
    CHECK_THROWS_AS(make_builtin("hyperbolic:1"), ConfigError);
    CHECK_THROWS_AS(make_builtin("gaussian:beta=1"), ConfigError);
    CHECK_THROWS_AS(make_builtin("sphere:2"), ConfigError);
    CHECK_THROWS_AS(make_builtin("euclidean:x"), ConfigError);
    const auto cat = builtin_catalog();
    for (std::size_t i = 1; i < cat.size(); ++i) CHECK(cat[i - 1].first < cat[i].first);
}
