#pragma once

// Builtin manifolds and their standard submersions.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subgeo/submersion.hpp"

namespace subgeo {

Manifold euclidean(int n);

/// Upper half space, g = δ / x_n², Levi-Civita connection.
Manifold hyperbolic(int n, DiffMode mode = DiffMode::Jet);

/// Normal family in (μ, σ): Fisher metric diag(1/σ², 2/σ²) with the α-connection.
Manifold gaussian(double alpha, DiffMode mode = DiffMode::Jet);

MetricField fisher_metric(DiffMode mode = DiffMode::Jet);
ConnectionField gaussian_alpha_connection(double alpha, DiffMode mode = DiffMode::Jet);

/// Amari-Chentsov tensor T_ijk of the normal family, closed form in (μ, σ).
CubicForm gaussian_skewness(const Point& p);

/// The same tensor from third derivatives of the log-partition function in
/// natural parameters, pulled back to (μ, σ).
CubicForm gaussian_skewness_from_potential(const Point& p);

/// Fisher metric as the pulled-back Hessian of the log-partition function.
Matrix fisher_from_potential(const Point& p);

/// Drop-last projection H^n -> R^{n-1} with φ = -log x_n.
SubmersionSetup hyperbolic_projection(int n, DiffMode mode = DiffMode::Jet);
/// Drop-last projection R^n -> R^{n-1}.
SubmersionSetup euclidean_projection(int n);
/// (μ, σ) -> μ onto the flat line, φ = -log σ.
SubmersionSetup gaussian_projection(double alpha, DiffMode mode = DiffMode::Jet);

struct Builtin {
    std::string name;
    Manifold manifold;
    std::optional<SubmersionSetup> submersion;
    /// Set for tangent bundles: the manifold the bundle is built over.
    std::optional<Manifold> bundle_base;
};

/// Resolves "euclidean:n", "hyperbolic:n", "gaussian:alpha=A" or
/// "tangent_bundle_of:<one of those>". Throws ConfigError on anything else.
Builtin make_builtin(std::string_view name, DiffMode mode = DiffMode::Jet);

/// Name pattern and one-line description, alphabetical.
std::vector<std::pair<std::string, std::string>> builtin_catalog();

}  // namespace subgeo
