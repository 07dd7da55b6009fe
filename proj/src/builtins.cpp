#include "subgeo/builtins.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "subgeo/tangent_bundle.hpp"

namespace subgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Coeffs = std::vector<std::vector<std::vector<Expr>>>;

Coeffs zero_coeffs(int n) {
    const auto s = static_cast<std::size_t>(n);
    return Coeffs(s, std::vector<std::vector<Expr>>(s, std::vector<Expr>(s)));
}

std::string number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, r.ptr);
    return v < 0 ? "(" + s + ")" : s;
}

std::vector<std::vector<Expr>> diagonal(const std::vector<std::string>& entries) {
    const int n = static_cast<int>(entries.size());
    std::vector<std::vector<Expr>> m(entries.size(), std::vector<Expr>(entries.size()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = parse(i == j ? entries[static_cast<std::size_t>(i)] : "0", n);
    return m;
}

Box drop_last(const Box& b) { return Box{{b.intervals.begin(), b.intervals.end() - 1}}; }

MapField drop_last_map(int n, DiffMode mode) {
    std::vector<Expr> comps;
    for (int i = 1; i < n; ++i) comps.push_back(parse("x" + std::to_string(i), n));
    return map_field(std::move(comps), n, mode);
}

int parse_dim(std::string_view text, std::string_view whole) {
    int n = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), n);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || n < 1 || n > 16)
        throw ConfigError("bad dimension in builtin \"" + std::string(whole) + "\"");
    return n;
}

// Jacobian of natural parameters θ = (μ/σ², -1/(2σ²)) with respect to (μ, σ).
Matrix natural_jacobian(const Point& p) {
    const double mu = p[0], s = p[1];
    Matrix j(2, 2);
    j << 1.0 / (s * s), -2.0 * mu / (s * s * s), 0.0, 1.0 / (s * s * s);
    return j;
}

JetD log_partition(const Point& p, int order) {
    static const ScalarField psi = scalar_field(parse("-(x1^2)/(4*x2) - 0.5*log(-x2)", 2), 2);
    Point theta(2);
    theta << p[0] / (p[1] * p[1]), -0.5 / (p[1] * p[1]);
    return psi.eval(theta, order);
}

}  // namespace

Manifold euclidean(int n) {
    if (n < 1) throw ContractViolation("euclidean dimension must be positive");
    return {"euclidean:" + std::to_string(n), n, Box::cube(n, -1.0, 1.0), Box::cube(n, -kInf, kInf),
            constant_metric(Matrix::Identity(n, n)), flat_connection(n)};
}

Manifold hyperbolic(int n, DiffMode mode) {
    if (n < 2) throw ContractViolation("hyperbolic dimension must be at least 2");
    const std::string d = "1/(x" + std::to_string(n) + "^2)";
    MetricField g = metric_field(diagonal(std::vector<std::string>(static_cast<std::size_t>(n), d)), n, mode);
    Box box = Box::cube(n, -1.0, 1.0);
    box.intervals.back() = {0.5, 2.0};
    Box domain = Box::cube(n, -kInf, kInf);
    domain.intervals.back() = {0.0, kInf};
    ConnectionField conn = levi_civita(g);
    return {"hyperbolic:" + std::to_string(n), n, box, domain, std::move(g), std::move(conn)};
}

MetricField fisher_metric(DiffMode mode) { return metric_field(diagonal({"1/(x2^2)", "2/(x2^2)"}), 2, mode); }

ConnectionField gaussian_alpha_connection(double alpha, DiffMode mode) {
    const ConnectionField lc = levi_civita(fisher_metric(mode));
    if (alpha == 0.0) return lc;
    // -(α/2) g^{kl} T_ijl
    Coeffs c = zero_coeffs(2);
    c[0][0][1] = c[0][1][0] = parse(number(-alpha) + "/x2", 2);
    c[1][0][0] = parse(number(-alpha / 2.0) + "/x2", 2);
    c[1][1][1] = parse(number(-2.0 * alpha) + "/x2", 2);
    return lc + christoffel_field(std::move(c), 2, mode);
}

Manifold gaussian(double alpha, DiffMode mode) {
    Box box{{{-1.0, 1.0}, {0.5, 2.0}}};
    Box domain{{{-kInf, kInf}, {0.0, kInf}}};
    std::string name = "gaussian:alpha=" + number(alpha);
    std::erase(name, '(');
    std::erase(name, ')');
    return {name, 2, box, domain, fisher_metric(mode), gaussian_alpha_connection(alpha, mode)};
}

CubicForm gaussian_skewness(const Point& p) {
    const double s3 = p[1] * p[1] * p[1];
    CubicForm t(2);
    t(0, 0, 1) = t(0, 1, 0) = t(1, 0, 0) = 2.0 / s3;
    t(1, 1, 1) = 8.0 / s3;
    return t;
}

CubicForm gaussian_skewness_from_potential(const Point& p) {
    const JetD psi = log_partition(p, 3);
    const Matrix j = natural_jacobian(p);
    CubicForm t(2);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                double s = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c) s += psi.d(a, b, c) * j(a, i) * j(b, k) * j(c, l);
                t(i, k, l) = s;
            }
    return t;
}

Matrix fisher_from_potential(const Point& p) {
    const JetD psi = log_partition(p, 2);
    Matrix h(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) h(a, b) = psi.d(a, b);
    const Matrix j = natural_jacobian(p);
    return j.transpose() * h * j;
}

SubmersionSetup hyperbolic_projection(int n, DiffMode mode) {
    Manifold total = hyperbolic(n, mode);
    Manifold base = euclidean(n - 1);
    base.box = drop_last(total.box);
    const std::string name = total.name;
    return make_submersion(name, std::move(total), std::move(base), drop_last_map(n, mode),
                           HorizontalRule::MetricOrthogonal, {},
                           scalar_field(parse("-log(x" + std::to_string(n) + ")", n), n, mode));
}

SubmersionSetup euclidean_projection(int n) {
    if (n < 2) throw ContractViolation("euclidean projection needs n >= 2");
    Manifold total = euclidean(n);
    Manifold base = euclidean(n - 1);
    const std::string name = total.name;
    return make_submersion(name, std::move(total), std::move(base), drop_last_map(n, DiffMode::Jet));
}

SubmersionSetup gaussian_projection(double alpha, DiffMode mode) {
    Manifold total = gaussian(alpha, mode);
    Manifold base = euclidean(1);
    base.box = drop_last(total.box);
    const std::string name = total.name;
    return make_submersion(name, std::move(total), std::move(base), drop_last_map(2, mode),
                           HorizontalRule::MetricOrthogonal, {}, scalar_field(parse("-log(x2)", 2), 2, mode));
}

Builtin make_builtin(std::string_view name, DiffMode mode) {
    const auto colon = name.find(':');
    if (colon == std::string_view::npos) throw ConfigError("unknown builtin \"" + std::string(name) + "\"");
    const std::string_view kind = name.substr(0, colon), arg = name.substr(colon + 1);
    if (kind == "tangent_bundle_of") {
        if (arg.starts_with("tangent_bundle_of")) throw ConfigError("nested tangent bundles are not supported");
        Builtin inner = make_builtin(arg, mode);
        Builtin b{std::string(name), tangent_bundle(inner.manifold), bundle_projection(inner.manifold), std::nullopt};
        b.bundle_base = std::move(inner.manifold);
        return b;
    }
    if (kind == "euclidean") {
        const int n = parse_dim(arg, name);
        Builtin b{std::string(name), euclidean(n), std::nullopt, std::nullopt};
        if (n >= 2) b.submersion = euclidean_projection(n);
        return b;
    }
    if (kind == "hyperbolic") {
        const int n = parse_dim(arg, name);
        if (n < 2) throw ConfigError("hyperbolic builtin needs n >= 2");
        return {std::string(name), hyperbolic(n, mode), hyperbolic_projection(n, mode), std::nullopt};
    }
    if (kind == "gaussian") {
        if (!arg.starts_with("alpha=")) throw ConfigError("gaussian builtin expects alpha=A");
        const std::string_view num = arg.substr(6);
        double alpha = 0.0;
        const auto r = std::from_chars(num.data(), num.data() + num.size(), alpha);
        if (r.ec != std::errc() || r.ptr != num.data() + num.size() || !std::isfinite(alpha))
            throw ConfigError("bad alpha in builtin \"" + std::string(name) + "\"");
        return {std::string(name), gaussian(alpha, mode), gaussian_projection(alpha, mode), std::nullopt};
    }
    throw ConfigError("unknown builtin \"" + std::string(name) + "\"");
}

std::vector<std::pair<std::string, std::string>> builtin_catalog() {
    return {
        {"euclidean:n", "flat R^n, identity metric; drop-last projection onto R^(n-1)"},
        {"gaussian:alpha=A", "normal family (mu, sigma), Fisher metric, alpha-connection; projection to the mu-line"},
        {"hyperbolic:n", "upper half space, metric delta/x_n^2; drop-last projection, phi = -log(x_n)"},
        {"tangent_bundle_of:<builtin>", "tangent bundle of a builtin with Sasaki, horizontal and complete lifts"},
    };
}

}  // namespace subgeo
