#include <doctest.h>

#include "subgeo/sampling.hpp"

using namespace subgeo;

TEST_CASE("single point in the unit interval") {
    const auto s = sample(Box{{{0.0, 1.0}}}, 1, 7);
    REQUIRE(s.points.size() == 1);
    CHECK(s.points[0][0] > 0.0);
    CHECK(s.points[0][0] < 1.0);
}

TEST_CASE("sampling is deterministic") {
    const Box box{{{-1.0, 1.0}, {0.5, 2.0}}};
    const auto a = sample(box, 64, 0), b = sample(box, 64, 0);
    REQUIRE(a.points.size() == 64);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
        CHECK(box.strictly_contains(a.points[i]));
    }
    const auto c = sample(box, 64, 1);
    CHECK(c.points[0] != a.points[0]);
}

TEST_CASE("bad boxes") {
    CHECK_THROWS_AS(sample(Box{{{1.0, 0.0}}}, 3, 0), ContractViolation);
    CHECK_THROWS_AS(sample(Box{{{0.0, 1.0}}}, 0, 0), ContractViolation);
    CHECK_THROWS_AS(sample(Box{}, 3, 0), ContractViolation);
}
