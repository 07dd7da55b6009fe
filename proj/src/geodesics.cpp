#include "subgeo/geodesics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace subgeo {

namespace {

Vector acceleration(const ConnectionField& conn, const Point& x, const Vector& v) {
    return -contract(values(conn.eval(x, 0)), v, v);
}

void require_grid(const Trajectory& traj) {
    if (traj.nodes() < 5) throw ContractViolation("curve grid needs at least 5 nodes");
}

double base_pairing(const Matrix& gb, const Vector& a, int c) { return gb.col(c).dot(a); }

}  // namespace

Trajectory integrate_geodesic(const ConnectionField& conn, const Box& domain, const Point& p0, const Vector& v0,
                              double t_end, double h) {
    if (!(h > 0.0) || !(t_end > 0.0)) throw ContractViolation("step and end time must be positive");
    if (p0.size() != conn.dim || v0.size() != conn.dim) throw ContractViolation("initial state has the wrong dimension");
    if (!domain.strictly_contains(p0)) throw BoundaryExit("initial point outside the domain", 0.0);
    const int steps = static_cast<int>(std::ceil(t_end / h - 1e-9));
    Trajectory tr;
    tr.h = t_end / steps;
    tr.t.reserve(static_cast<std::size_t>(steps) + 1);
    tr.t.push_back(0.0);
    tr.x.push_back(p0);
    tr.v.push_back(v0);
    Point x = p0;
    Vector v = v0;
    const double dt = tr.h;
    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        auto inside = [&](const Point& q) {
            if (!domain.strictly_contains(q) || !q.allFinite())
                throw BoundaryExit("geodesic left the domain", t);
            return q;
        };
        const Vector k1x = v, k1v = acceleration(conn, x, v);
        const Point x2 = inside(x + 0.5 * dt * k1x);
        const Vector k2x = v + 0.5 * dt * k1v, k2v = acceleration(conn, x2, k2x);
        const Point x3 = inside(x + 0.5 * dt * k2x);
        const Vector k3x = v + 0.5 * dt * k2v, k3v = acceleration(conn, x3, k3x);
        const Point x4 = inside(x + dt * k3x);
        const Vector k4x = v + dt * k3v, k4v = acceleration(conn, x4, k4x);
        x = inside(x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x));
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        tr.t.push_back((i + 1) * dt);
        tr.x.push_back(x);
        tr.v.push_back(v);
    }
    return tr;
}

CurveField curve_field(std::vector<Vector> values) { return {std::move(values), {}, {}}; }

CurveField curve_field(const SubmersionSetup& s, const Trajectory& traj, std::vector<Vector> values) {
    CurveField f{std::move(values), {}, {}};
    for (int i = 0; i < traj.nodes(); ++i) {
        const SplitBasis sp = split(s, traj.x[static_cast<std::size_t>(i)]);
        f.horizontal.push_back(sp.proj_h * f.values[static_cast<std::size_t>(i)]);
        f.vertical.push_back(sp.proj_v * f.values[static_cast<std::size_t>(i)]);
    }
    return f;
}

std::vector<Vector> stencil_derivative(const std::vector<Vector>& f, double h) {
    const auto n = f.size();
    if (n < 5) throw ContractViolation("stencil needs at least 5 nodes");
    std::vector<Vector> d(n);
    const double s = 1.0 / (12.0 * h);
    d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    d[n - 2] = -s * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    d[n - 1] = -s * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
    return d;
}

CurveField covariant_along_curve(const ConnectionField& conn, const Trajectory& traj, const CurveField& e) {
    require_grid(traj);
    std::vector<Vector> d = stencil_derivative(e.values, traj.h);
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] += contract(values(conn.eval(traj.x[i], 0)), traj.v[i], e.values[i]);
    return curve_field(std::move(d));
}

double geodesic_residual(const ConnectionField& conn, const Trajectory& traj) {
    const CurveField acc = covariant_along_curve(conn, traj, curve_field(traj.v));
    double worst = 0.0;
    for (const auto& a : acc.values) worst = std::max(worst, inf_norm(a));
    return worst;
}

double energy_drift(const MetricField& g, const Trajectory& traj) {
    auto energy = [&](std::size_t i) { return traj.v[i].dot(values(g.eval(traj.x[i], 0)) * traj.v[i]); };
    const double e0 = energy(0);
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.x.size(); ++i) worst = std::max(worst, std::abs(energy(i) - e0));
    return worst;
}

ResidualPair curve_decomposition_residuals(const SubmersionSetup& s, const Trajectory& traj, const CurveField& e) {
    require_grid(traj);
    const int m = s.m();
    const auto& conn = s.total.connection;
    const CurveField field = e.horizontal.empty() ? curve_field(s, traj, e.values) : e;
    const CurveField ep = covariant_along_curve(conn, traj, field);
    const CurveField vp = covariant_along_curve(conn, traj, curve_field(field.vertical));

    // E_* = π*(H) along π∘σ and its base covariant derivative.
    std::vector<Vector> estar, bvel;
    std::vector<Point> bpts;
    for (int i = 0; i < traj.nodes(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const SplitBasis sp = split(s, traj.x[k]);
        estar.push_back(sp.dpi * field.horizontal[k]);
        bvel.push_back(sp.dpi * traj.v[k]);
        bpts.push_back(project(s, traj.x[k]));
    }
    const std::vector<Vector> destar = stencil_derivative(estar, traj.h);

    ResidualPair out;
    for (int i = 0; i < traj.nodes(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const Point& x = traj.x[k];
        const SplitBasis sp = split(s, x);
        const Vector X = sp.proj_h * traj.v[k], U = sp.proj_v * traj.v[k];
        const Vector& H = field.horizontal[k];
        const Vector& V = field.vertical[k];
        const Matrix gb = values(s.base.metric.eval(bpts[k], 0));
        const Vector estar_p = destar[k] + contract(values(s.base.connection.eval(bpts[k], 0)), bvel[k], estar[k]);
        const Vector mix = fundamental_A(s, conn, x, H, U) + fundamental_A(s, conn, x, X, V) + fundamental_T(s, conn, x, U, V);
        const Vector d = dphi(s, x);
        const Vector px = sp.dpi * X, ph = sp.dpi * H;
        const Vector lhs_vec = sp.dpi * (sp.proj_h * ep.values[k]);
        const Vector rhs_vec = estar_p + sp.dpi * mix;
        for (int c = 0; c < m; ++c) {
            const double lhs = base_pairing(gb, lhs_vec, c);
            const double rhs = base_pairing(gb, rhs_vec, c) - d.dot(sp.lift.col(c)) * px.dot(gb * ph) +
                               d.dot(X) * base_pairing(gb, ph, c) + d.dot(H) * base_pairing(gb, px, c);
            out.horizontal = std::max(out.horizontal, std::abs(lhs - rhs));
        }
        const Vector vert = sp.proj_v * ep.values[k] -
                            (fundamental_A(s, conn, x, X, H) + fundamental_T(s, conn, x, U, H) + sp.proj_v * vp.values[k]);
        out.vertical = std::max(out.vertical, inf_norm(vert));
    }
    return out;
}

ResidualPair sigma_second_residuals(const SubmersionSetup& s, const Trajectory& traj) {
    return curve_decomposition_residuals(s, traj, curve_field(s, traj, traj.v));
}

double projection_condition_residual(const SubmersionSetup& s, const Trajectory& traj) {
    const auto& conn = s.total.connection;
    double worst = 0.0;
    for (int i = 0; i < traj.nodes(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const Point& x = traj.x[k];
        const SplitBasis sp = split(s, x);
        const Vector X = sp.proj_h * traj.v[k], U = sp.proj_v * traj.v[k];
        const Matrix gb = values(s.base.metric.eval(project(s, x), 0));
        const Vector w = sp.dpi * (2.0 * fundamental_A(s, conn, x, X, U) + fundamental_T(s, conn, x, U, U));
        const Vector px = sp.dpi * X;
        const Vector d = dphi(s, x);
        for (int c = 0; c < s.m(); ++c) {
            const double r = base_pairing(gb, w, c) + 2.0 * d.dot(X) * base_pairing(gb, px, c) -
                             d.dot(sp.lift.col(c)) * px.dot(gb * px);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

double base_geodesic_residual(const SubmersionSetup& s, const Trajectory& traj) {
    require_grid(traj);
    std::vector<Vector> bvel;
    std::vector<Point> bpts;
    for (int i = 0; i < traj.nodes(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        bvel.push_back(split(s, traj.x[k]).dpi * traj.v[k]);
        bpts.push_back(project(s, traj.x[k]));
    }
    const std::vector<Vector> acc = stencil_derivative(bvel, traj.h);
    double worst = 0.0;
    for (std::size_t k = 0; k < acc.size(); ++k)
        worst = std::max(worst, inf_norm(acc[k] + contract(values(s.base.connection.eval(bpts[k], 0)), bvel[k], bvel[k])));
    return worst;
}

CheckResult geodesic_projection_check(const SubmersionSetup& s, const Trajectory& traj, double tol) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = "geodesic_projection";
    r.tolerance = tol;
    r.samples = traj.nodes();
    try {
        const double premise = geodesic_residual(s.total.connection, traj);
        const double condition = projection_condition_residual(s, traj);
        const double base = base_geodesic_residual(s, traj);
        r.components = {{"premise_geodesic", premise}, {"condition", condition}, {"base_geodesic", base}};
        const bool holds = condition <= tol, projects = base <= tol;
        r.max_residual = holds == projects ? 0.0 : std::max(condition, base);
        if (premise > 10.0 * tol) {
            r.status = Status::PremiseFailed;
            r.notes.push_back("curve is not a geodesic of the total space");
        } else {
            r.status = holds == projects ? Status::Pass : Status::Fail;
        }
        r.notes.push_back(std::string("condition ") + (holds ? "holds" : "fails") + ", projection " +
                          (projects ? "is" : "is not") + " a geodesic");
    } catch (const EvalDomain&) {
        ++r.incidents;
        r.status = Status::Error;
    } catch (const SingularMatrix&) {
        ++r.incidents;
        r.status = Status::Error;
    } catch (const RankDrop&) {
        ++r.incidents;
        r.status = Status::Error;
    }
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    const int n = traj.x.empty() ? 0 : static_cast<int>(traj.x.front().size());
    out << 't';
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= n; ++i) out << ",v" << i;
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        put(traj.t[k]);
        for (int i = 0; i < n; ++i) out << ',', put(traj.x[k][i]);
        for (int i = 0; i < n; ++i) out << ',', put(traj.v[k][i]);
        out << '\n';
    }
}

}  // namespace subgeo
