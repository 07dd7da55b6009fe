#pragma once

// Submersions π: M → B with a horizontal distribution: splitting, lifts,
// fundamental tensors, induced structures and the conformal variants.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subgeo/geometry.hpp"

namespace subgeo {

enum class HorizontalRule { MetricOrthogonal, Explicit };

struct SubmersionSetup {
    std::string name;
    Manifold total;
    Manifold base;
    MapField map;
    HorizontalRule rule = HorizontalRule::MetricOrthogonal;
    /// n x m matrix whose columns span the horizontal space (Explicit rule).
    MatrixField horizontal;
    std::optional<ScalarField> phi;

    /// Coordinates solved for when moving along a fiber; chosen once at the
    /// center of the total box. `vertical_coords` are the remaining n - m.
    std::vector<int> pivots;
    std::vector<int> vertical_coords;

    int n() const { return total.dim; }
    int m() const { return base.dim; }
};

/// Validates dimensions and fixes the pivot pattern. Throws RankDrop if dπ is
/// rank deficient at the box center.
SubmersionSetup make_submersion(std::string name, Manifold total, Manifold base, MapField map,
                                HorizontalRule rule = HorizontalRule::MetricOrthogonal,
                                MatrixField horizontal = {}, std::optional<ScalarField> phi = std::nullopt);

Point project(const SubmersionSetup& s, const Point& p);

/// Splitting at p. `vertical` columns span ker dπ (one per vertical coordinate,
/// with a unit entry there); `lift` maps base vectors to horizontal lifts.
struct SplitBasis {
    Matrix dpi;
    Matrix vertical;
    Matrix horizontal;
    Matrix lift;
    Matrix proj_v;
    Matrix proj_h;
};

/// The same objects as jets of order `order` at p (the map is expanded to
/// order + 1).
struct SplitJets {
    JetMatrix dpi;
    JetMatrix vertical;
    JetMatrix horizontal;
    JetMatrix lift;
    JetMatrix proj_v;
    JetMatrix proj_h;
};

SplitJets split_jets(const SubmersionSetup& s, const Point& p, int order);
SplitBasis split(const SubmersionSetup& s, const Point& p);

/// Horizontal vector at p projecting to w.
Vector horizontal_lift(const SubmersionSetup& s, const Point& p, const Vector& w);

/// Gradient of φ at p (zero without a conformal factor).
Vector dphi(const SubmersionSetup& s, const Point& p);

/// Affine extension F(x) = f + linear (x - p) used to feed tensors; an empty
/// matrix means the constant extension.
struct Extension {
    Matrix linear;
};

/// O'Neill tensors of `conn` at p.
Vector fundamental_T(const SubmersionSetup& s, const ConnectionField& conn, const Point& p, const Vector& e,
                     const Vector& f, const Extension& ext_e = {}, const Extension& ext_f = {});
Vector fundamental_A(const SubmersionSetup& s, const ConnectionField& conn, const Point& p, const Vector& e,
                     const Vector& f, const Extension& ext_e = {}, const Extension& ext_f = {});

/// S_V X = ∇_V X - dual_V X. The difference of two connections is tensorial,
/// so this is a pointwise contraction.
Vector s_tensor(const ConnectionField& conn, const ConnectionField& dual, const Point& p, const Vector& v,
                const Vector& x);

/// ∇_{X̃a} X̃b at p for base coordinate fields, as a total-space vector.
Vector lifted_covariant(const SubmersionSetup& s, const ConnectionField& conn, const Point& p, int a, int b);

/// g_B(π*(∇_X̃ Ỹ), Z) - g_B(∇*_X Y, Z) + dφ(Z̃) g_B(X, Y) - dφ(X̃) g_B(Y, Z) - dφ(Ỹ) g_B(Z, X)
/// for base coordinate fields X = ∂a, Y = ∂b, Z = ∂c.
double conformal_defect(const SubmersionSetup& s, const ConnectionField& conn, const ConnectionField& base_conn,
                        const Point& p, int a, int b, int c);

/// Largest |conformal_defect| over all coordinate triples at p.
double conformal_defect_max(const SubmersionSetup& s, const ConnectionField& conn,
                            const ConnectionField& base_conn, const Point& p);

/// Point on the fiber through π(p) whose vertical coordinates are `vertical`
/// (Newton on the pivot coordinates, starting from p).
Point fiber_point(const SubmersionSetup& s, const Point& p, const Vector& vertical);

/// Jets of the embedding x(z) where x's vertical coordinates equal
/// `vertical[c]` and the pivots solve π(x) = target. All inputs are jets over
/// the same variables z; `guess` seeds the Newton iteration.
JetVector solve_on_fiber(const SubmersionSetup& s, const std::vector<JetD>& vertical,
                         const std::vector<JetD>& target, const Point& guess, int order);

/// Fiber π⁻¹(π(p)) in the chart given by its vertical coordinates, at p.
struct FiberChart {
    Point point;
    Matrix basis;               // n x (n - m), coordinate vectors of the fiber
    JetMatrix metric;           // ĝ, order 1 in the fiber variables
    Christoffel connection;     // ∇̂ = 𝓥∇𝓥 in fiber coordinates
};
FiberChart fiber_chart(const SubmersionSetup& s, const ConnectionField& conn, const Point& p);

/// Base structures induced through the section of π with the vertical
/// coordinates of `through` held fixed.
MetricField induced_metric(const SubmersionSetup& s, const Point& through);
ConnectionField induced_connection(const SubmersionSetup& s, const Point& through);

struct InducedStructures {
    Point fiber_point;
    Matrix metric;
    Christoffel connection;
};
/// g̃ and ∇' at base point b, evaluated on the fiber point over b whose
/// vertical coordinates match `through`.
InducedStructures induced_structures(const SubmersionSetup& s, const Point& b, const Point& through);

CheckResult check_split(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);
CheckResult check_semi_riemannian(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);
CheckResult check_tensoriality(const SubmersionSetup& s, const std::vector<Point>& samples, double tol,
                               std::uint64_t seed = 0);
CheckResult check_gauss_weingarten(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);

/// π*(𝓗(∇_X̃ Ỹ)) compared across `fiber_count` points of the fiber through
/// each sample.
CheckResult check_projectable(const SubmersionSetup& s, const std::vector<Point>& samples, double tol,
                              int fiber_count);
CheckResult check_affine_hd(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);
CheckResult theorem21_verify(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);

CheckResult check_conformal_metric(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);
CheckResult check_conformal_defect(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);
CheckResult check_dual_conformal_pair(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);

/// The six component residuals at p, keyed "cs6" .. "cs11".
std::vector<std::pair<std::string, double>> lemma_components(const SubmersionSetup& s, const Point& p);
CheckResult check_lemma_components(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);

/// Residuals of the four conditions at p (torsion-free premise excluded).
struct FourConditions {
    double horizontal_s = 0.0;  // 𝓗(S_V X) - (A_X V - Ā_X V)
    double vertical_s = 0.0;    // 𝓥(S_X V) - (T_V X - T̄_V X)
    double fiber = 0.0;         // fiber statistical residual
    double base = 0.0;          // base statistical residual
};
FourConditions four_conditions(const SubmersionSetup& s, const Point& p);

/// Evaluates the premises (torsion-free, conformal HD, metric-orthogonal 𝓗)
/// and the four conditions, then compares the verdict with is_statistical on
/// the total space. Passes iff the two verdicts agree.
CheckResult four_conditions_check(const SubmersionSetup& s, const std::vector<Point>& samples, double tol);

}  // namespace subgeo
