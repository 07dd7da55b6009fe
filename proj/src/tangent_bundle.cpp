#include "subgeo/tangent_bundle.hpp"

#include <limits>

namespace subgeo {

namespace {

int half(const Point& z) {
    if (z.size() % 2 != 0) throw ContractViolation("bundle point must have even dimension");
    return static_cast<int>(z.size() / 2);
}

JetD up(const JetD& j, int dim) { return j.is_constant() ? j : j.embedded(dim); }

JetD coordinate(const Point& z, int i, int order) {
    if (order == 0) return JetD(static_cast<int>(z.size()), 0, z[i]);
    return JetD::seed(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())), i, order);
}

std::vector<JetD> fiber_coords(const Point& z, int order) {
    const int n = half(z);
    std::vector<JetD> u;
    for (int i = 0; i < n; ++i) u.push_back(coordinate(z, n + i, order));
    return u;
}

JetVector zeros(int dim, int order) { return JetVector::Constant(dim, JetD(dim, order, 0.0)); }

Vector value_of(const JetVector& v) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i].value();
    return out;
}

Vector eval_vector(const MapField& f, const Point& x) { return value_of(f.eval(x, 0)); }

// Values of W^c for a base field given by its order-1 jets at x.
Vector complete_value(const JetVector& w, const Point& z) {
    const int n = half(z);
    Vector out(2 * n);
    for (int i = 0; i < n; ++i) {
        out[i] = w[i].value();
        double s = 0.0;
        if (!w[i].is_constant())
            for (int j = 0; j < n; ++j) s += z[n + j] * w[i].d(j);
        out[n + i] = s;
    }
    return out;
}

Vector horizontal_value(const Christoffel& gamma, const Vector& w, const Point& z) {
    const int n = half(z);
    Vector out(2 * n);
    for (int i = 0; i < n; ++i) {
        out[i] = w[i];
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += w[j] * z[n + k] * gamma(i, j, k);
        out[n + i] = -s;
    }
    return out;
}

Vector vertical_value(const Vector& w) {
    const auto n = w.size();
    Vector out = Vector::Zero(2 * n);
    out.tail(n) = w;
    return out;
}

JetD pair(const JetMatrix& g, const JetVector& a, const JetVector& b) {
    JetD s(0.0);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) s += a[i] * g(i, j) * b[j];
    return s;
}

Vector jet_directional(const JetVector& f, const Vector& dir) {
    Vector out = Vector::Zero(f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k)
        if (!f[k].is_constant())
            for (Eigen::Index a = 0; a < dir.size(); ++a) out[k] += dir[a] * f[k].d(static_cast<int>(a));
    return out;
}

std::vector<Point> base_points(const std::vector<Point>& samples) {
    std::vector<Point> out;
    for (const auto& z : samples) out.push_back(bundle_base_point(z));
    return out;
}

CheckResult renamed(CheckResult r, std::string name) {
    r.name = std::move(name);
    return r;
}

}  // namespace

Point bundle_base_point(const Point& z) { return z.head(half(z)); }
Vector bundle_fiber_point(const Point& z) { return z.tail(half(z)); }

JetD vertical_lift(const ScalarField& f, const Point& z, int order) {
    return up(f.eval(bundle_base_point(z), order), static_cast<int>(z.size()));
}

JetD complete_lift(const ScalarField& f, const Point& z, int order) {
    const int n = half(z);
    const JetD fj = f.eval(bundle_base_point(z), order + 1);
    const auto u = fiber_coords(z, order);
    JetD s(2 * n, order, 0.0);
    for (int i = 0; i < n; ++i) s += u[static_cast<std::size_t>(i)] * up(fj.derivative(i), 2 * n);
    return s;
}

JetVector vertical_lift(const MapField& x, const Point& z, int order) {
    const int n = half(z);
    const JetVector xj = x.eval(bundle_base_point(z), order);
    JetVector out = zeros(2 * n, order);
    for (int i = 0; i < n; ++i) out[n + i] = up(xj[i], 2 * n);
    return out;
}

JetVector complete_lift(const MapField& x, const Point& z, int order) {
    const int n = half(z);
    const JetVector xj = x.eval(bundle_base_point(z), order + 1);
    const auto u = fiber_coords(z, order);
    JetVector out = zeros(2 * n, order);
    for (int i = 0; i < n; ++i) {
        out[i] = up(xj[i].truncated(order), 2 * n);
        JetD s(2 * n, order, 0.0);
        for (int j = 0; j < n; ++j) s += u[static_cast<std::size_t>(j)] * up(xj[i].derivative(j), 2 * n);
        out[n + i] = s;
    }
    return out;
}

JetVector gamma_operator(const ConnectionField& conn, const MapField& x, const Point& z, int order) {
    const int n = half(z);
    const Point p = bundle_base_point(z);
    const JetVector xj = x.eval(p, order + 1);
    const JetChristoffel g = conn.eval(p, order);
    const auto u = fiber_coords(z, order);
    JetVector out = zeros(2 * n, order);
    for (int i = 0; i < n; ++i) {
        JetD s(2 * n, order, 0.0);
        for (int j = 0; j < n; ++j) {
            JetD cov = up(xj[i].derivative(j), 2 * n);
            for (int k = 0; k < n; ++k) cov += up(xj[k].truncated(order), 2 * n) * up(g(i, j, k), 2 * n);
            s += u[static_cast<std::size_t>(j)] * cov;
        }
        out[n + i] = s;
    }
    return out;
}

JetVector horizontal_lift_bundle(const ConnectionField& conn, const MapField& x, const Point& z, int order) {
    const int n = half(z);
    const Point p = bundle_base_point(z);
    const JetVector xj = x.eval(p, order);
    const JetChristoffel g = conn.eval(p, order);
    const auto u = fiber_coords(z, order);
    JetVector out = zeros(2 * n, order);
    for (int i = 0; i < n; ++i) {
        out[i] = up(xj[i], 2 * n);
        JetD s(2 * n, order, 0.0);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += up(xj[j], 2 * n) * u[static_cast<std::size_t>(k)] * up(g(i, j, k), 2 * n);
        out[n + i] = -s;
    }
    return out;
}

MetricField lifted_metric(LiftedMetric kind, const MetricField& g, const ConnectionField& conn) {
    const int n = g.dim;
    return {2 * n, 2 * n, 2 * n, [kind, g, conn, n](const Point& z, int order) {
                const Point p = bundle_base_point(z);
                const auto u = fiber_coords(z, order);
                JetMatrix gg(n, n);
                JetMatrix out(2 * n, 2 * n);
                if (kind == LiftedMetric::Complete) {
                    const JetMatrix full = g.eval(p, order + 1);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            const JetD gij = up(full(i, j).truncated(order), 2 * n);
                            JetD s(2 * n, order, 0.0);
                            for (int k = 0; k < n; ++k) s += u[static_cast<std::size_t>(k)] * up(full(i, j).derivative(k), 2 * n);
                            out(i, j) = s;
                            out(i, n + j) = out(n + i, j) = gij;
                            out(n + i, n + j) = JetD(2 * n, order, 0.0);
                        }
                    return out;
                }
                const JetMatrix gb = g.eval(p, order);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) gg(i, j) = up(gb(i, j), 2 * n);
                const JetChristoffel gamma = conn.eval(p, order);
                // N(i, j) = u^k Γ^i_jk, so ∂/∂x^j = (∂_j)^H + N(i, j) ∂/∂u^i.
                JetMatrix nm(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        JetD s(2 * n, order, 0.0);
                        for (int k = 0; k < n; ++k) s += u[static_cast<std::size_t>(k)] * up(gamma(i, j, k), 2 * n);
                        nm(i, j) = s;
                    }
                const JetMatrix gn = gg * nm;
                if (kind == LiftedMetric::Sasaki) {
                    out.topLeftCorner(n, n) = gg + nm.transpose() * gn;
                    out.topRightCorner(n, n) = gn.transpose();
                    out.bottomLeftCorner(n, n) = gn;
                    out.bottomRightCorner(n, n) = gg;
                } else {
                    out.topLeftCorner(n, n) = gn + gn.transpose();
                    out.topRightCorner(n, n) = gg;
                    out.bottomLeftCorner(n, n) = gg;
                    out.bottomRightCorner(n, n) = JetMatrix::Constant(n, n, JetD(2 * n, order, 0.0));
                }
                return out;
            }};
}

ConnectionField lifted_connection(LiftedConnection kind, const ConnectionField& conn) {
    const int n = conn.dim;
    return {2 * n, [kind, conn, n](const Point& z, int order) {
                const Point p = bundle_base_point(z);
                const auto u = fiber_coords(z, order);
                const JetChristoffel full = conn.eval(p, order + 1);
                auto G = [&](int k, int i, int j) { return up(full(k, i, j).truncated(order), 2 * n); };
                auto dG = [&](int l, int k, int i, int j) { return up(full(k, i, j).derivative(l), 2 * n); };
                JetChristoffel out(2 * n, JetD(2 * n, order, 0.0));
                for (int k = 0; k < n; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            out(k, i, j) = G(k, i, j);
                            JetD s(2 * n, order, 0.0);
                            if (kind == LiftedConnection::Complete) {
                                for (int l = 0; l < n; ++l) s += u[static_cast<std::size_t>(l)] * dG(l, k, i, j);
                                out(n + k, i, n + j) = G(k, i, j);
                                out(n + k, n + i, j) = G(k, i, j);
                            } else {
                                for (int q = 0; q < n; ++q) {
                                    JetD t = dG(i, k, j, q);
                                    for (int l = 0; l < n; ++l) t += G(l, j, q) * G(k, i, l) - G(l, i, j) * G(k, l, q);
                                    s += u[static_cast<std::size_t>(q)] * t;
                                }
                                out(n + k, i, n + j) = G(k, i, j);
                                out(n + k, n + i, j) = G(k, j, i);
                            }
                            out(n + k, i, j) = s;
                        }
                return out;
            }};
}

Manifold tangent_bundle(const Manifold& base, LiftedMetric metric, LiftedConnection connection) {
    const int n = base.dim;
    const double inf = std::numeric_limits<double>::infinity();
    return {"tangent_bundle_of:" + base.name, 2 * n, base.box * Box::cube(n, -1.0, 1.0),
            base.domain * Box::cube(n, -inf, inf), lifted_metric(metric, base.metric, base.connection),
            lifted_connection(connection, base.connection)};
}

SubmersionSetup bundle_projection(const Manifold& base, LiftedMetric metric, LiftedConnection connection) {
    const int n = base.dim;
    MapField map{2 * n, n, [n](const Point& z, int order) {
                     JetVector out(n);
                     for (int i = 0; i < n; ++i) out[i] = coordinate(z, i, order);
                     return out;
                 }};
    const ConnectionField conn = base.connection;
    MatrixField horizontal{2 * n, 2 * n, n, [conn, n](const Point& z, int order) {
                               const JetChristoffel g = conn.eval(bundle_base_point(z), order);
                               const auto u = fiber_coords(z, order);
                               JetMatrix h = JetMatrix::Constant(2 * n, n, JetD(2 * n, order, 0.0));
                               for (int a = 0; a < n; ++a) {
                                   h(a, a) = JetD(2 * n, order, 1.0);
                                   for (int i = 0; i < n; ++i) {
                                       JetD s(2 * n, order, 0.0);
                                       for (int k = 0; k < n; ++k) s += u[static_cast<std::size_t>(k)] * up(g(i, a, k), 2 * n);
                                       h(n + i, a) = -s;
                                   }
                               }
                               return h;
                           }};
    return make_submersion("tangent_bundle_of:" + base.name, tangent_bundle(base, metric, connection), base,
                           std::move(map), HorizontalRule::Explicit, std::move(horizontal));
}

std::vector<MapField> probe_fields(int n) {
    std::vector<MapField> out;
    auto var = [n](int i) { return "x" + std::to_string(i % n + 1); };
    for (int a = 0; a < n; ++a) {
        std::vector<Expr> c;
        for (int i = 0; i < n; ++i) c.push_back(parse(i == a ? "1" : "0", n));
        out.push_back(map_field(std::move(c), n));
    }
    std::vector<Expr> p1, p2;
    for (int i = 0; i < n; ++i) {
        p1.push_back(parse("0.5 + 0.3*" + var(i) + "^2 - 0.2*" + var(i + 1), n));
        p2.push_back(parse(var(i) + "*" + var(i + 1) + " + 0.1*" + var(i + 1), n));
    }
    out.push_back(map_field(std::move(p1), n));
    out.push_back(map_field(std::move(p2), n));
    return out;
}

CheckResult check_lift_rules(const Manifold& base, LiftRule rule, const std::vector<Point>& samples, double tol) {
    const int n = base.dim;
    const auto fields = probe_fields(n);
    const auto& conn = base.connection;
    const auto& g = base.metric;
    static const char* names[] = {"lift_rules_sasaki", "lift_rules_horizontal_metric", "lift_rules_complete_metric",
                                  "lift_rules_complete_connection", "lift_rules_horizontal_connection", "lift_rules_lifts"};
    const MetricField gs = lifted_metric(LiftedMetric::Sasaki, g, conn);
    const MetricField gh = lifted_metric(LiftedMetric::Horizontal, g, conn);
    const MetricField gc = lifted_metric(LiftedMetric::Complete, g, conn);
    const ConnectionField nc = lifted_connection(LiftedConnection::Complete, conn);
    const ConnectionField nh = lifted_connection(LiftedConnection::Horizontal, conn);
    std::optional<SubmersionSetup> orthogonal;
    if (rule == LiftRule::Lifts)
        orthogonal = make_submersion("sasaki", tangent_bundle(base), base, bundle_projection(base).map);
    const ScalarField probe = scalar_field(parse("x1^2*x" + std::to_string(n) + " + 0.5*x1", n), n);

    return evaluate_samples(names[static_cast<int>(rule)], "", samples, tol, [&](const Point& z, ResidualSink& sink) {
        const Point x = bundle_base_point(z);
        const Matrix gx = values(g.eval(x, 0));
        const Christoffel gamma = values(conn.eval(x, 0));
        const JetChristoffel gamma1 = conn.eval(x, 1);
        for (const auto& X : fields) {
            const Vector xv = eval_vector(X, x);
            const Vector XH = value_of(horizontal_lift_bundle(conn, X, z, 0));
            const Vector XV = value_of(vertical_lift(X, z, 0));
            const Vector XC = value_of(complete_lift(X, z, 0));
            for (const auto& Y : fields) {
                const Vector yv = eval_vector(Y, x);
                const double gxy = xv.dot(gx * yv);
                const Vector YH = value_of(horizontal_lift_bundle(conn, Y, z, 0));
                const Vector YV = value_of(vertical_lift(Y, z, 0));
                switch (rule) {
                case LiftRule::Sasaki: {
                    const Matrix G = values(gs.eval(z, 0));
                    sink.record("hh", XH.dot(G * YH) - gxy);
                    sink.record("hv", XH.dot(G * YV));
                    sink.record("vv", XV.dot(G * YV) - gxy);
                    break;
                }
                case LiftRule::HorizontalMetric: {
                    const Matrix G = values(gh.eval(z, 0));
                    sink.record("hh", XH.dot(G * YH));
                    sink.record("hv", XH.dot(G * YV) - gxy);
                    sink.record("vv", XV.dot(G * YV));
                    break;
                }
                case LiftRule::CompleteMetric: {
                    const Matrix G = values(gc.eval(z, 0));
                    const Vector YC = value_of(complete_lift(Y, z, 0));
                    const JetD gxy1 = pair(g.eval(x, 1), X.eval(x, 1), Y.eval(x, 1));
                    double lifted = 0.0;
                    if (!gxy1.is_constant())
                        for (int j = 0; j < n; ++j) lifted += z[n + j] * gxy1.d(j);
                    sink.record("cc", XC.dot(G * YC) - lifted);
                    sink.record("cv", XC.dot(G * YV) - gxy);
                    sink.record("vv", XV.dot(G * YV));
                    break;
                }
                case LiftRule::CompleteConnection: {
                    const Christoffel G = values(nc.eval(z, 0));
                    const JetVector w = covariant_derivative(gamma1, X.eval(x, 1), Y.eval(x, 2));
                    sink.record("cc", covariant_derivative(G, XC, complete_lift(Y, z, 1)) - complete_value(w, z));
                    sink.record("vv", covariant_derivative(G, XV, vertical_lift(Y, z, 1)));
                    break;
                }
                case LiftRule::HorizontalConnection: {
                    const Christoffel G = values(nh.eval(z, 0));
                    const Vector w = covariant_derivative(gamma, xv, Y.eval(x, 1));
                    sink.record("vv", covariant_derivative(G, XV, vertical_lift(Y, z, 1)));
                    sink.record("vh", covariant_derivative(G, XV, horizontal_lift_bundle(conn, Y, z, 1)));
                    sink.record("hv", covariant_derivative(G, XH, vertical_lift(Y, z, 1)) - vertical_value(w));
                    sink.record("hh", covariant_derivative(G, XH, horizontal_lift_bundle(conn, Y, z, 1)) -
                                          horizontal_value(gamma, w, z));
                    break;
                }
                case LiftRule::Lifts: {
                    const JetVector xv1 = vertical_lift(X, z, 1), yv1 = vertical_lift(Y, z, 1);
                    sink.record("vertical_bracket", jet_directional(yv1, XV) - jet_directional(xv1, YV));
                    break;
                }
                }
            }
            if (rule == LiftRule::Lifts) {
                sink.record("gamma", XH - (XC - value_of(gamma_operator(conn, X, z, 0))));
                sink.record("projection", Vector(XH.head(n) - xv));
                sink.record("cross_module", horizontal_lift(*orthogonal, z, xv) - XH);
                const JetD fc = complete_lift(probe, z, 1);
                double lhs = 0.0;
                for (int a = 0; a < 2 * n; ++a) lhs += XC[a] * fc.d(a);
                const JetD f2 = probe.eval(x, 2);
                const JetVector x1 = X.eval(x, 1);
                JetD xf(0.0);
                for (int i = 0; i < n; ++i) xf += x1[i] * f2.derivative(i);
                double rhs = 0.0;
                if (!xf.is_constant())
                    for (int j = 0; j < n; ++j) rhs += z[n + j] * xf.d(j);
                sink.record("complete_derivation", lhs - rhs);
            }
        }
    });
}

CheckResult prop41_check(const Manifold& base, const std::vector<Point>& samples, double tol) {
    return renamed(check_affine_hd(bundle_projection(base), samples, tol), "prop41");
}

CheckResult prop42_check(const Manifold& base, const std::vector<Point>& samples, double tol) {
    return renamed(check_semi_riemannian(bundle_projection(base), samples, tol), "prop42");
}

CheckResult tm_statistical_check(const Manifold& base, const std::vector<Point>& samples, double tol) {
    const SubmersionSetup s = bundle_projection(base);
    CheckResult four = four_conditions_check(s, samples, tol);
    const CheckResult lemma = check_lemma_components(s, samples, tol);
    CheckResult r = four;
    r.name = "tm_statistical";
    static const std::pair<const char*, const char*> rename[] = {{"cs7", "cst1"}, {"cs8", "cst2"}, {"cs9", "cst3"},
                                                                 {"cs10", "cst4"}, {"cs11", "cst5"}, {"cs6", "cst6"}};
    for (const auto& [from, to] : rename) {
        const auto it = lemma.components.find(from);
        if (it != lemma.components.end()) r.components[to] = it->second;
    }
    r.incidents = std::max(four.incidents, lemma.incidents);
    if (four.status == Status::Error || lemma.status == Status::Error) {
        r.status = Status::Error;
        return r;
    }
    r.max_residual = lemma.max_residual;
    if (four.status == Status::Pass && lemma.status != Status::Pass) {
        r.status = Status::Fail;
        r.notes.push_back("component identities exceed tolerance");
    }
    return r;
}

std::vector<CheckResult> remark_checks(const Manifold& base, const std::vector<Point>& samples, double tol) {
    const std::vector<Point> xs = base_points(samples);
    const bool premise = is_statistical(base.connection, base.metric, xs, tol).passed();
    const ConnectionField nc = lifted_connection(LiftedConnection::Complete, base.connection);
    const MetricField gc = lifted_metric(LiftedMetric::Complete, base.metric, base.connection);

    std::vector<CheckResult> out;
    out.push_back(renamed(is_statistical(nc, gc, samples, tol), "remark_complete_metric"));

    const ConnectionField dual_lift = dual_connection(nc, gc);
    const ConnectionField lift_dual =
        lifted_connection(LiftedConnection::Complete, dual_connection(base.connection, base.metric));
    out.push_back(evaluate_samples("remark_dual_complete_lift", "", samples, tol, [&](const Point& z, ResidualSink& sink) {
        const Christoffel a = values(dual_lift.eval(z, 0)), b = values(lift_dual.eval(z, 0));
        double worst = 0.0;
        for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
        sink.record("coefficients", worst);
    }));

    const ConnectionField nh = lifted_connection(LiftedConnection::Horizontal, base.connection);
    const MetricField gs = lifted_metric(LiftedMetric::Sasaki, base.metric, base.connection);
    const CheckResult stat = is_statistical(nh, gs, samples, tol);
    CheckResult flat = evaluate_samples("remark_horizontal_connection", "", xs, tol, [&](const Point& x, ResidualSink& sink) {
        sink.record("nabla_g", max_abs(nabla_g(base.connection, base.metric, x)));
    });
    if (stat.status == Status::Error) {
        flat.status = Status::Error;
    } else if (flat.status != Status::Error) {
        const bool parallel = flat.status == Status::Pass;
        flat.components["statistical"] = stat.max_residual;
        flat.status = parallel == stat.passed() ? Status::Pass : Status::Fail;
        flat.notes.push_back(std::string("nabla g ") + (parallel ? "vanishes" : "does not vanish") +
                             "; horizontal lift " + (stat.passed() ? "statistical" : "not statistical"));
        flat.max_residual = parallel == stat.passed() ? 0.0 : std::max(flat.max_residual, stat.max_residual);
    }
    out.push_back(flat);

    if (!premise)
        for (auto& r : out)
            if (r.status != Status::Error) {
                r.status = Status::PremiseFailed;
                r.notes.push_back("base is not statistical");
            }
    return out;
}

}  // namespace subgeo
