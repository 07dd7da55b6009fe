#include "subgeo/geometry.hpp"

#include <cmath>

namespace subgeo {

std::string to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::PremiseFailed: return "premise-failed";
    case Status::Error: return "error";
    }
    return "error";
}

void ResidualSink::record(const std::string& component, double residual) {
    const double r = std::isfinite(residual) ? std::abs(residual) : HUGE_VAL;
    auto [it, inserted] = components_.emplace(component, r);
    if (!inserted) it->second = std::max(it->second, r);
    max_ = std::max(max_, r);
}

ConnectionField levi_civita(const MetricField& g) {
    const int n = g.dim;
    return {n, [g, n](const Point& p, int order) {
                const JetMatrix full = g.eval(p, order + 1);
                const JetMatrix ginv = inverse(truncated(full, order));
                std::vector<JetMatrix> dg;
                dg.reserve(static_cast<std::size_t>(n));
                for (int l = 0; l < n; ++l) dg.push_back(derivative(full, l));
                // Lowered symbol [ij, l].
                Array3<JetD> low(n);
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j)
                        for (int l = 0; l < n; ++l) {
                            const JetD v = 0.5 * (dg[static_cast<std::size_t>(i)](j, l) +
                                                  dg[static_cast<std::size_t>(j)](i, l) -
                                                  dg[static_cast<std::size_t>(l)](i, j));
                            low(i, j, l) = v;
                            low(j, i, l) = v;
                        }
                JetChristoffel out(n, JetD(n, order, 0.0));
                for (int k = 0; k < n; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j) {
                            JetD s(n, order, 0.0);
                            for (int l = 0; l < n; ++l) s += ginv(k, l) * low(i, j, l);
                            out(k, i, j) = s;
                            out(k, j, i) = s;
                        }
                return out;
            }};
}

Christoffel levi_civita(const MetricField& g, const Point& p) { return values(levi_civita(g).eval(p, 0)); }

Array3<double> torsion(const ConnectionField& conn, const Point& p) {
    const Christoffel gamma = values(conn.eval(p, 0));
    const int n = conn.dim;
    Array3<double> out(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(k, i, j) = gamma(k, i, j) - gamma(k, j, i);
    return out;
}

CubicForm nabla_g(const ConnectionField& conn, const MetricField& g, const Point& p) {
    const int n = conn.dim;
    const JetMatrix gj = g.eval(p, 1);
    const Matrix gv = values(gj);
    const Christoffel gamma = values(conn.eval(p, 0));
    CubicForm c(n);
    for (int i = 0; i < n; ++i) {
        const Matrix di = partials(gj, i);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = di(j, k);
                for (int l = 0; l < n; ++l) s -= gamma(l, i, j) * gv(l, k) + gamma(l, i, k) * gv(j, l);
                c(i, j, k) = s;
            }
    }
    return c;
}

ConnectionField dual_connection(const ConnectionField& conn, const MetricField& g) {
    if (conn.dim != g.dim) throw ContractViolation("connection and metric dimensions differ");
    const int n = g.dim;
    return {n, [conn, g, n](const Point& p, int order) {
                const JetMatrix full = g.eval(p, order + 1);
                const JetMatrix gk = truncated(full, order);
                const JetMatrix ginv = inverse(gk);
                const JetChristoffel gamma = conn.eval(p, order);
                // b(j, i, k) = ∂i g_jk - Γ^m_ij g_mk
                Array3<JetD> b(n);
                for (int i = 0; i < n; ++i) {
                    const JetMatrix di = derivative(full, i);
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) {
                            JetD s = di(j, k);
                            for (int m = 0; m < n; ++m) s -= gamma(m, i, j) * gk(m, k);
                            b(j, i, k) = s;
                        }
                }
                JetChristoffel out(n, JetD(n, order, 0.0));
                for (int l = 0; l < n; ++l)
                    for (int i = 0; i < n; ++i)
                        for (int k = 0; k < n; ++k) {
                            JetD s(n, order, 0.0);
                            for (int j = 0; j < n; ++j) s += ginv(l, j) * b(j, i, k);
                            out(l, i, k) = s;
                        }
                return out;
            }};
}

Curvature curvature(const ConnectionField& conn, const Point& p) {
    const int n = conn.dim;
    const JetChristoffel gj = conn.eval(p, 1);
    const Christoffel g = values(gj);
    auto dg = [&gj](int var, int k, int i, int j) {
        const JetD& c = gj(k, i, j);
        return c.is_constant() ? 0.0 : c.d(var);
    };
    Curvature r(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = dg(i, k, j, l) - dg(j, k, i, l);
                    for (int m = 0; m < n; ++m) s += g(k, i, m) * g(m, j, l) - g(k, j, m) * g(m, i, l);
                    r(k, l, i, j) = s;
                }
    return r;
}

double statistical_residual(const ConnectionField& conn, const MetricField& g, const Point& p) {
    const int n = conn.dim;
    const double tor = max_abs(torsion(conn, p));
    const CubicForm c = nabla_g(conn, g, p);
    double sym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) sym = std::max(sym, std::abs(c(i, j, k) - c(j, i, k)));
    return std::max(tor, sym);
}

CheckResult is_statistical(const ConnectionField& conn, const MetricField& g, const std::vector<Point>& samples,
                           double tol) {
    return evaluate_samples("is_statistical", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const int n = conn.dim;
        sink.record("torsion", max_abs(torsion(conn, p)));
        const CubicForm c = nabla_g(conn, g, p);
        double sym = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) sym = std::max(sym, std::abs(c(i, j, k) - c(j, i, k)));
        sink.record("cubic_symmetry", sym);
    });
}

CheckResult check_curvature_duality(const ConnectionField& conn, const MetricField& g,
                                    const std::vector<Point>& samples, double tol) {
    const ConnectionField dual = dual_connection(conn, g);
    const int n = conn.dim;
    auto result = evaluate_samples("curvature_duality", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Matrix gv = values(g.eval(p, 0));
        const Curvature r = curvature(conn, p), rd = curvature(dual, p);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    for (int w = 0; w < n; ++w) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k) s += gv(w, k) * r(k, l, i, j) + gv(l, k) * rd(k, w, i, j);
                        worst = std::max(worst, std::abs(s));
                    }
        sink.record("duality", worst);
    });
    const auto premise = is_statistical(conn, g, samples, tol);
    if (premise.status != Status::Pass && result.status != Status::Error) {
        result.status = Status::PremiseFailed;
        result.notes.push_back("connection is not statistical with respect to the metric");
    }
    return result;
}

CheckResult check_constant_curvature(const ConnectionField& conn, const MetricField& g, double k,
                                     const std::vector<Point>& samples, double tol) {
    const int n = conn.dim;
    return evaluate_samples("constant_curvature", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Matrix gv = values(g.eval(p, 0));
        const Curvature r = curvature(conn, p);
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double expect = k * (gv(j, l) * (a == i) - gv(i, l) * (a == j));
                        worst = std::max(worst, std::abs(r(a, l, i, j) - expect));
                    }
        sink.record("curvature", worst);
    });
}

Vector covariant_derivative(const Christoffel& gamma, const Vector& dir, const JetVector& field) {
    const int n = gamma.size();
    Vector out = Vector::Zero(n);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        const JetD& f = field[k];
        for (int i = 0; i < n; ++i) {
            if (!f.is_constant()) s += dir[i] * f.d(i);
            for (int j = 0; j < n; ++j) s += gamma(k, i, j) * dir[i] * field[j].value();
        }
        out[k] = s;
    }
    return out;
}

JetVector covariant_derivative(const JetChristoffel& gamma, const JetVector& dir, const JetVector& field) {
    const int n = gamma.size();
    JetVector out(n);
    for (int k = 0; k < n; ++k) {
        JetD s(0.0);
        for (int i = 0; i < n; ++i) {
            s += dir[i] * field[k].derivative(i);
            for (int j = 0; j < n; ++j) s += gamma(k, i, j) * dir[i] * field[j];
        }
        out[k] = s;
    }
    return out;
}

Vector contract(const Christoffel& gamma, const Vector& a, const Vector& b) {
    const int n = gamma.size();
    Vector out = Vector::Zero(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[k] += gamma(k, i, j) * a[i] * b[j];
    return out;
}

double contract(const CubicForm& c, const Vector& a, const Vector& b, const Vector& d) {
    const int n = c.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += c(i, j, k) * a[i] * b[j] * d[k];
    return s;
}

}  // namespace subgeo
