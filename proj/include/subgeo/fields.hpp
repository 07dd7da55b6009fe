#pragma once

// Field types: closures from a chart point and a requested jet order to jets
// over the chart's coordinates. Leaves are built from expressions; derived
// fields (Levi-Civita, duals, lifts) compose leaves through jet arithmetic.

#include <functional>
#include <string>
#include <vector>

#include "subgeo/expr.hpp"
#include "subgeo/linalg.hpp"

namespace subgeo {

/// How leaf fields produce derivatives: exact jet propagation, or central
/// finite differences of plain values (independent cross-check).
enum class DiffMode { Jet, FiniteDifference };

struct ScalarField {
    int dim = 0;
    std::function<JetD(const Point&, int order)> eval;
};

/// Map into R^out (submersion components, vector fields when out == dim).
struct MapField {
    int dim = 0;
    int out = 0;
    std::function<JetVector(const Point&, int order)> eval;
};

struct MatrixField {
    int dim = 0;
    int rows = 0;
    int cols = 0;
    std::function<JetMatrix(const Point&, int order)> eval;
};

/// Symmetric (0,2) tensor in coordinates; rows == cols == dim.
using MetricField = MatrixField;

struct ConnectionField {
    int dim = 0;
    std::function<JetChristoffel(const Point&, int order)> eval;
};

/// A jet normalized to `dim` variables and `order` (constants are expanded).
JetD normalized(const JetD& j, int dim, int order);

/// Jets of `values` at p with partials up to `order` from central differences.
std::vector<JetD> finite_difference_jets(const std::function<std::vector<double>(const Point&)>& values,
                                         const Point& p, int order);

ScalarField scalar_field(Expr e, int dim, DiffMode mode = DiffMode::Jet);
ScalarField constant_scalar(int dim, double v);
MapField map_field(std::vector<Expr> components, int dim, DiffMode mode = DiffMode::Jet);
MatrixField matrix_field(std::vector<std::vector<Expr>> entries, int dim, DiffMode mode = DiffMode::Jet);

/// Metric from its upper triangle (entries[i][j] read for i <= j).
MetricField metric_field(const std::vector<std::vector<Expr>>& entries, int dim, DiffMode mode = DiffMode::Jet);
MetricField constant_metric(const Matrix& g);

/// Connection from explicit coefficients; coeffs[k][i][j] is Γ^k_ij (null = 0).
ConnectionField christoffel_field(std::vector<std::vector<std::vector<Expr>>> coeffs, int dim,
                                  DiffMode mode = DiffMode::Jet);
ConnectionField flat_connection(int dim);

ConnectionField operator+(const ConnectionField& a, const ConnectionField& b);
ConnectionField scaled(const ConnectionField& a, double s);

/// Largest relative discrepancy between jet partials (orders 1 and 2, or only
/// 1 when `max_order` is 1) and central differences of plain values of the
/// same field, over `points`.
struct DerivativeAudit {
    double max_rel_first = 0.0;
    double max_rel_second = 0.0;
    int probes = 0;
};
DerivativeAudit audit_derivatives(const std::function<std::vector<JetD>(const Point&, int)>& field,
                                  const std::vector<Point>& points, int max_order = 2);

std::function<std::vector<JetD>(const Point&, int)> flatten(const MatrixField& f);
std::function<std::vector<JetD>(const Point&, int)> flatten(const ConnectionField& f);
std::function<std::vector<JetD>(const Point&, int)> flatten(const MapField& f);
std::function<std::vector<JetD>(const Point&, int)> flatten(const ScalarField& f);

}  // namespace subgeo
