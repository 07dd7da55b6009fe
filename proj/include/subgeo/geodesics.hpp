#pragma once

// Geodesics, covariant derivatives along curves and the decomposition of σ''
// under a conformal submersion.

#include <iosfwd>
#include <string>
#include <vector>

#include "subgeo/submersion.hpp"

namespace subgeo {

/// Uniform grid t_i = t0 + i h with the state (x, ẋ) at each node.
struct Trajectory {
    double h = 0.0;
    std::vector<double> t;
    std::vector<Point> x;
    std::vector<Vector> v;
    std::string integrator = "rk4";

    int nodes() const { return static_cast<int>(t.size()); }
};

/// Classic fixed-step RK4 on ẍ^k = -Γ^k_ij ẋ^i ẋ^j. The step is shrunk so the
/// grid ends exactly at t_end. Throws BoundaryExit if a stage leaves `domain`.
Trajectory integrate_geodesic(const ConnectionField& conn, const Box& domain, const Point& p0, const Vector& v0,
                              double t_end, double h);

/// A vector field along a trajectory, with its split when a submersion is known.
struct CurveField {
    std::vector<Vector> values;
    std::vector<Vector> horizontal;
    std::vector<Vector> vertical;
};

CurveField curve_field(std::vector<Vector> values);
CurveField curve_field(const SubmersionSetup& s, const Trajectory& traj, std::vector<Vector> values);

/// Time derivative of node values by five-point stencils (one-sided near the ends).
std::vector<Vector> stencil_derivative(const std::vector<Vector>& f, double h);

/// E' = dE/dt + Γ(ẋ, E) at every node.
CurveField covariant_along_curve(const ConnectionField& conn, const Trajectory& traj, const CurveField& e);

/// max over nodes of |σ''|.
double geodesic_residual(const ConnectionField& conn, const Trajectory& traj);

/// max over nodes of |g(ẋ, ẋ)(t) - g(ẋ, ẋ)(0)|.
double energy_drift(const MetricField& g, const Trajectory& traj);

struct ResidualPair {
    double horizontal = 0.0;
    double vertical = 0.0;
};

/// Node-wise residuals of the horizontal identity (paired with every base
/// coordinate field Z) and of 𝓥(E') = A_X H + T_U H + 𝓥(V').
ResidualPair curve_decomposition_residuals(const SubmersionSetup& s, const Trajectory& traj, const CurveField& e);

/// The same identities for E = σ'.
ResidualPair sigma_second_residuals(const SubmersionSetup& s, const Trajectory& traj);

/// Largest |g_B(π*(2A_X U + T_U U), Z) + 2dφ(X) g_B(π*X, Z) - dφ(Z̃) |π*X|²| over nodes and Z.
double projection_condition_residual(const SubmersionSetup& s, const Trajectory& traj);

/// Largest |(π∘σ)''| over nodes, covariant for the base connection.
double base_geodesic_residual(const SubmersionSetup& s, const Trajectory& traj);

/// Passes iff (condition holds) ⇔ (π∘σ is a base geodesic). PremiseFailed if
/// σ is not a geodesic within 10 tol.
CheckResult geodesic_projection_check(const SubmersionSetup& s, const Trajectory& traj, double tol);

/// Header `t,x1..xn,v1..vn`, one row per node, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace subgeo
