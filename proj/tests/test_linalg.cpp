#include <doctest.h>

#include <random>

#include "subgeo/linalg.hpp"

using namespace subgeo;

TEST_CASE("solve_linear oracles") {
    CHECK((solve_linear(Matrix::Identity(3, 3), Vector::LinSpaced(3, 1, 3)) - Vector::LinSpaced(3, 1, 3)).norm() == 0.0);

    Matrix d(2, 2);
    d << 2, 0, 0, 4;
    Vector b(2);
    b << 2, 4;
    const Vector x = solve_linear(d, b);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));

    Matrix h(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h(i, j) = 1.0 / (i + j + 1);
    const Vector ones = Vector::Ones(3);
    CHECK((solve_linear(h, h * ones) - ones).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("singular matrices are rejected") {
    Matrix s(2, 2);
    s << 1, 2, 2, 4;
    CHECK_THROWS_AS(solve_linear(s, Vector::Ones(2)), SingularMatrix);
    CHECK_THROWS_AS(inverse(Matrix(Matrix::Zero(3, 3))), SingularMatrix);
    CHECK_THROWS_AS(solve_linear(Matrix::Ones(2, 3), Vector::Ones(2)), ContractViolation);
}

TEST_CASE("random well-conditioned round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = u(rng);
        a += n * Matrix::Identity(n, n);
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = u(rng);
        const Vector b = a * x;
        const Vector sol = solve_linear(a, b);
        CHECK((sol - x).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((a * sol - b).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + b.cwiseAbs().maxCoeff()));
    }
}
