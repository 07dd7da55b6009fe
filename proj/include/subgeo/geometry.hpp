#pragma once

// Metric and connection calculus on a single chart.

#include <string>
#include <vector>

#include "subgeo/check.hpp"
#include "subgeo/fields.hpp"
#include "subgeo/sampling.hpp"

namespace subgeo {

/// A charted manifold with its metric and connection.
///
/// `box` is where checks sample; `domain` is where the fields are defined
/// (possibly unbounded), used to stop geodesic integration.
struct Manifold {
    std::string name;
    int dim = 0;
    Box box;
    Box domain;
    MetricField metric;
    ConnectionField connection;
};

/// Levi-Civita connection of g. Evaluating at order K requests g at K + 1.
ConnectionField levi_civita(const MetricField& g);
Christoffel levi_civita(const MetricField& g, const Point& p);

/// Tor^k_ij = Γ^k_ij - Γ^k_ji.
Array3<double> torsion(const ConnectionField& conn, const Point& p);

/// C_ijk = (∇_{∂i} g)(∂j, ∂k).
CubicForm nabla_g(const ConnectionField& conn, const MetricField& g, const Point& p);

/// Connection dual to `conn` with respect to g. Order K requests g at K + 1.
ConnectionField dual_connection(const ConnectionField& conn, const MetricField& g);

/// R^k_lij, meaning R(∂i, ∂j) ∂l = R^k_lij ∂k.
Curvature curvature(const ConnectionField& conn, const Point& p);

/// max(|Tor|, |C_ijk - C_jik|) at p.
double statistical_residual(const ConnectionField& conn, const MetricField& g, const Point& p);

CheckResult is_statistical(const ConnectionField& conn, const MetricField& g, const std::vector<Point>& samples,
                           double tol);
CheckResult check_curvature_duality(const ConnectionField& conn, const MetricField& g,
                                    const std::vector<Point>& samples, double tol);
CheckResult check_constant_curvature(const ConnectionField& conn, const MetricField& g, double k,
                                     const std::vector<Point>& samples, double tol);

/// (∇_dir F)^k at the point where `field` (order >= 1) is expanded.
Vector covariant_derivative(const Christoffel& gamma, const Vector& dir, const JetVector& field);

/// Jet-valued covariant derivative; the result has order one less than `field`.
JetVector covariant_derivative(const JetChristoffel& gamma, const JetVector& dir, const JetVector& field);

/// Γ^k_ij a^i b^j.
Vector contract(const Christoffel& gamma, const Vector& a, const Vector& b);

/// C(a, b, c) = C_ijk a^i b^j c^k.
double contract(const CubicForm& c, const Vector& a, const Vector& b, const Vector& d);

}  // namespace subgeo
