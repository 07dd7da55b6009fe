#pragma once

// The tangent bundle (x; u) of a charted manifold: lifts of functions, vector
// fields, metrics and connections, and the bundle projection as a submersion.

#include <vector>

#include "subgeo/submersion.hpp"

namespace subgeo {

enum class LiftedMetric { Sasaki, Horizontal, Complete };
enum class LiftedConnection { Complete, Horizontal };

/// Bundle point (x; u) split into its halves.
Point bundle_base_point(const Point& z);
Vector bundle_fiber_point(const Point& z);

JetD vertical_lift(const ScalarField& f, const Point& z, int order);
/// f^c = u^i ∂_i f.
JetD complete_lift(const ScalarField& f, const Point& z, int order);

/// X^v = (0, X).
JetVector vertical_lift(const MapField& x, const Point& z, int order);
/// X^c = (X, u^j ∂_j X).
JetVector complete_lift(const MapField& x, const Point& z, int order);
/// γ(∇X) = (0, u^j (∂_j X^i + X^k Γ^i_jk)).
JetVector gamma_operator(const ConnectionField& conn, const MapField& x, const Point& z, int order);
/// X^H = (X, -X^j u^k Γ^i_jk).
JetVector horizontal_lift_bundle(const ConnectionField& conn, const MapField& x, const Point& z, int order);

/// Coordinate form of g^s, g^H or g^c on the bundle chart.
MetricField lifted_metric(LiftedMetric kind, const MetricField& g, const ConnectionField& conn);
/// Coordinate form of ∇^c or ∇^H. Order K needs the base connection at K + 1.
ConnectionField lifted_connection(LiftedConnection kind, const ConnectionField& conn);

/// 2n-dimensional chart: base box times [-1, 1]^n velocities.
Manifold tangent_bundle(const Manifold& base, LiftedMetric metric = LiftedMetric::Sasaki,
                        LiftedConnection connection = LiftedConnection::Complete);

/// π: TM -> M with 𝓗 spanned by the horizontal lifts (∂_i)^H.
SubmersionSetup bundle_projection(const Manifold& base, LiftedMetric metric = LiftedMetric::Sasaki,
                                  LiftedConnection connection = LiftedConnection::Complete);

/// Polynomial vector fields used to probe the lift rules: the coordinate
/// fields and two nonconstant fields.
std::vector<MapField> probe_fields(int n);

enum class LiftRule { Sasaki, HorizontalMetric, CompleteMetric, CompleteConnection, HorizontalConnection, Lifts };

/// Residuals of the defining rules of one lifted object on probe fields.
CheckResult check_lift_rules(const Manifold& base, LiftRule rule, const std::vector<Point>& samples, double tol);

/// (TM, ∇^c) -> (M, ∇) has an affine horizontal distribution.
CheckResult prop41_check(const Manifold& base, const std::vector<Point>& samples, double tol);
/// (TM, g^s) -> (M, g) is semi-Riemannian.
CheckResult prop42_check(const Manifold& base, const std::vector<Point>& samples, double tol);

/// Four conditions versus statisticity of (TM, ∇^c, g^s), with the six
/// component identities reported as cst1 .. cst6.
CheckResult tm_statistical_check(const Manifold& base, const std::vector<Point>& samples, double tol);

/// (a) (TM, ∇^c, g^c) statistical; (b) dual of ∇^c under g^c equals the
/// complete lift of the dual; (c) (TM, ∇^H, g^s) statistical iff ∇g = 0.
std::vector<CheckResult> remark_checks(const Manifold& base, const std::vector<Point>& samples, double tol);

}  // namespace subgeo
