#include "subgeo/submersion.hpp"

#include <cmath>
#include <random>

namespace subgeo {

namespace {

double unit_random(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Matrix dpi_values(const SubmersionSetup& s, const Point& p) {
    const JetVector mj = s.map.eval(p, 1);
    Matrix d(s.m(), s.n());
    for (int a = 0; a < s.m(); ++a)
        for (int i = 0; i < s.n(); ++i) d(a, i) = mj[a].is_constant() ? 0.0 : mj[a].d(i);
    return d;
}

Matrix pivot_block(const Matrix& dpi, const std::vector<int>& pivots) {
    Matrix out(dpi.rows(), static_cast<Eigen::Index>(pivots.size()));
    for (std::size_t c = 0; c < pivots.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = dpi.col(pivots[c]);
    return out;
}

std::vector<double> as_std(const Point& p) { return {p.data(), p.data() + p.size()}; }

// Newton on the pivot coordinates of x (vertical coordinates stay put).
Point solve_pivots(const SubmersionSetup& s, Point x, const Point& target) {
    const double scale = 1.0 + (target.size() ? target.cwiseAbs().maxCoeff() : 0.0);
    for (int it = 0; it < 60; ++it) {
        const Vector r = project(s, x) - target;
        if (r.size() == 0 || r.cwiseAbs().maxCoeff() <= 1e-14 * scale) return x;
        Matrix block;
        try {
            block = pivot_block(dpi_values(s, x), s.pivots);
            const Vector step = solve_linear(block, r);
            for (std::size_t c = 0; c < s.pivots.size(); ++c) x[s.pivots[c]] -= step[static_cast<Eigen::Index>(c)];
        } catch (const SingularMatrix&) {
            throw RankDrop("pivot block singular while solving for a fiber point", as_std(x));
        }
        if (!x.allFinite()) throw RankDrop("fiber solve diverged", as_std(x));
    }
    const Vector r = project(s, x) - target;
    if (r.cwiseAbs().maxCoeff() <= 1e-11 * scale) return x;
    throw RankDrop("fiber solve did not converge", as_std(x));
}

// Cached pointwise data for one connection at one point.
struct Frame {
    Point p;
    Point b;
    SplitJets jets;  // order 1
    Matrix dpi, vertical, lift, proj_v, proj_h;
    Matrix g, gb;
    Christoffel gamma;
    Vector grad_phi;
    double phi = 0.0;
};

Frame make_frame(const SubmersionSetup& s, const ConnectionField& conn, const Point& p) {
    Frame f;
    f.p = p;
    f.b = project(s, p);
    f.jets = split_jets(s, p, 1);
    f.dpi = values(f.jets.dpi);
    f.vertical = values(f.jets.vertical);
    f.lift = values(f.jets.lift);
    f.proj_v = values(f.jets.proj_v);
    f.proj_h = values(f.jets.proj_h);
    f.g = values(s.total.metric.eval(p, 0));
    f.gb = values(s.base.metric.eval(f.b, 0));
    f.gamma = values(conn.eval(p, 0));
    f.grad_phi = Vector::Zero(s.n());
    if (s.phi) {
        const JetD j = s.phi->eval(p, 1);
        f.phi = j.value();
        if (!j.is_constant())
            for (int i = 0; i < s.n(); ++i) f.grad_phi[i] = j.d(i);
    }
    return f;
}

JetVector extend(const Vector& v, const Extension& ext, const Point& p) {
    const int n = static_cast<int>(p.size());
    JetVector out(n);
    for (int k = 0; k < n; ++k) {
        JetD x(n, 1, v[k]);
        if (ext.linear.size() != 0)
            for (int i = 0; i < n; ++i) x.d1_ref(i) = ext.linear(k, i);
        out[k] = x;
    }
    return out;
}

Vector tensor_T(const Frame& f, const Vector& e, const Vector& v, const Extension& ext) {
    const JetVector field = extend(v, ext, f.p);
    const Vector dir = f.proj_v * e;
    const JetVector vf = f.jets.proj_v * field, hf = f.jets.proj_h * field;
    return f.proj_h * covariant_derivative(f.gamma, dir, vf) + f.proj_v * covariant_derivative(f.gamma, dir, hf);
}

Vector tensor_A(const Frame& f, const Vector& e, const Vector& v, const Extension& ext) {
    const JetVector field = extend(v, ext, f.p);
    const Vector dir = f.proj_h * e;
    const JetVector vf = f.jets.proj_v * field, hf = f.jets.proj_h * field;
    return f.proj_v * covariant_derivative(f.gamma, dir, hf) + f.proj_h * covariant_derivative(f.gamma, dir, vf);
}

Vector lifted_cov(const Frame& f, int a, int b) {
    return covariant_derivative(f.gamma, Vector(f.lift.col(a)), JetVector(f.jets.lift.col(b)));
}

double defect(const Frame& f, const Christoffel& base_gamma, int a, int b, int c) {
    const Vector w = f.dpi * lifted_cov(f, a, b);
    const int m = static_cast<int>(f.gb.rows());
    double s = 0.0;
    for (int d = 0; d < m; ++d) s += f.gb(d, c) * (w[d] - base_gamma(d, a, b));
    const auto dphi_of = [&f](int k) { return f.grad_phi.dot(f.lift.col(k)); };
    return s + dphi_of(c) * f.gb(a, b) - dphi_of(a) * f.gb(b, c) - dphi_of(b) * f.gb(c, a);
}

double defect_max(const SubmersionSetup& s, const Frame& f, const ConnectionField& base_conn) {
    const Christoffel bg = values(base_conn.eval(f.b, 0));
    double worst = 0.0;
    for (int a = 0; a < s.m(); ++a)
        for (int b = 0; b < s.m(); ++b)
            for (int c = 0; c < s.m(); ++c) worst = std::max(worst, std::abs(defect(f, bg, a, b, c)));
    return worst;
}

double cubic_asymmetry(const CubicForm& c) {
    const int n = c.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(c(i, j, k) - c(j, i, k)));
    return worst;
}

// Cubic form of a jet metric (order >= 1) and connection values.
CubicForm cubic_form(const JetMatrix& g, const Christoffel& gamma) {
    const int n = gamma.size();
    const Matrix gv = values(g);
    CubicForm c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = g(j, k).is_constant() ? 0.0 : g(j, k).d(i);
                for (int l = 0; l < n; ++l) s -= gamma(l, i, j) * gv(l, k) + gamma(l, i, k) * gv(j, l);
                c(i, j, k) = s;
            }
    return c;
}

double fiber_statistical_residual(const FiberChart& fc) {
    const int k = fc.connection.size();
    double tor = 0.0;
    for (int c = 0; c < k; ++c)
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                tor = std::max(tor, std::abs(fc.connection(c, a, b) - fc.connection(c, b, a)));
    if (k == 0) return 0.0;
    return std::max(tor, cubic_asymmetry(cubic_form(fc.metric, fc.connection)));
}

JetMatrix compose_all(const JetMatrix& outer, const JetVector& inner) {
    const std::vector<JetD> in(inner.data(), inner.data() + inner.size());
    JetMatrix out(outer.rows(), outer.cols());
    for (Eigen::Index r = 0; r < outer.rows(); ++r)
        for (Eigen::Index c = 0; c < outer.cols(); ++c) out(r, c) = compose(outer(r, c), std::span<const JetD>(in));
    return out;
}

// Section b -> x(b) through `through`: vertical coordinates held fixed.
JetVector section(const SubmersionSetup& s, const Point& b, const Point& through, int order) {
    const int m = s.m();
    std::vector<JetD> target;
    if (order == 0) {
        for (int a = 0; a < m; ++a) target.emplace_back(m, 0, b[a]);
    } else {
        target = seed_all<double>(std::span<const double>(b.data(), static_cast<std::size_t>(m)), order);
    }
    std::vector<JetD> vertical;
    for (int c : s.vertical_coords) vertical.emplace_back(m, order, through[c]);
    return solve_on_fiber(s, vertical, target, through, order);
}

}  // namespace

SubmersionSetup make_submersion(std::string name, Manifold total, Manifold base, MapField map, HorizontalRule rule,
                                MatrixField horizontal, std::optional<ScalarField> phi) {
    SubmersionSetup s;
    s.name = std::move(name);
    s.total = std::move(total);
    s.base = std::move(base);
    s.map = std::move(map);
    s.rule = rule;
    s.horizontal = std::move(horizontal);
    s.phi = std::move(phi);
    const int n = s.n(), m = s.m();
    if (m < 1 || m > n) throw ContractViolation("base dimension must lie in 1..n");
    if (s.map.dim != n || s.map.out != m) throw ContractViolation("map has the wrong shape");
    if (rule == HorizontalRule::Explicit && (s.horizontal.rows != n || s.horizontal.cols != m))
        throw ContractViolation("horizontal columns must form an n x m matrix");

    const Point center = s.total.box.center();
    const Matrix d = dpi_values(s, center);
    Eigen::ColPivHouseholderQR<Matrix> qr(d);
    qr.setThreshold(1e-10);
    if (qr.rank() < m) throw RankDrop("dπ is rank deficient at the box center", as_std(center));
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int c = 0; c < m; ++c) is_pivot[static_cast<std::size_t>(qr.colsPermutation().indices()[c])] = true;
    for (int i = 0; i < n; ++i) (is_pivot[static_cast<std::size_t>(i)] ? s.pivots : s.vertical_coords).push_back(i);
    return s;
}

Point project(const SubmersionSetup& s, const Point& p) {
    const JetVector v = s.map.eval(p, 0);
    Point b(s.m());
    for (int a = 0; a < s.m(); ++a) b[a] = v[a].value();
    return b;
}

SplitJets split_jets(const SubmersionSetup& s, const Point& p, int order) {
    const int n = s.n(), m = s.m();
    const JetVector mj = s.map.eval(p, order + 1);
    SplitJets out;
    out.dpi = JetMatrix(m, n);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i) out.dpi(a, i) = normalized(mj[a], n, order + 1).derivative(i);

    JetMatrix block(m, m);
    for (int c = 0; c < m; ++c) block.col(c) = out.dpi.col(s.pivots[static_cast<std::size_t>(c)]);
    JetMatrix block_inv;
    try {
        block_inv = inverse(block);
    } catch (const SingularMatrix&) {
        throw RankDrop("pivot pattern degenerate", as_std(p));
    }
    const int k = n - m;
    out.vertical = JetMatrix::Constant(n, k, JetD(n, order, 0.0));
    for (int c = 0; c < k; ++c) {
        const int j = s.vertical_coords[static_cast<std::size_t>(c)];
        out.vertical(j, c) = JetD(n, order, 1.0);
        const JetVector rest = -(block_inv * out.dpi.col(j));
        for (int r = 0; r < m; ++r) out.vertical(s.pivots[static_cast<std::size_t>(r)], c) = rest[r];
    }

    if (s.rule == HorizontalRule::MetricOrthogonal) {
        out.horizontal = inverse(s.total.metric.eval(p, order)) * out.dpi.transpose();
    } else {
        out.horizontal = s.horizontal.eval(p, order);
    }
    try {
        out.lift = out.horizontal * inverse(JetMatrix(out.dpi * out.horizontal));
    } catch (const SingularMatrix&) {
        throw RankDrop("horizontal space is not transverse to the fiber", as_std(p));
    }
    out.proj_h = out.lift * out.dpi;
    out.proj_v = JetMatrix::Identity(n, n) - out.proj_h;
    return out;
}

SplitBasis split(const SubmersionSetup& s, const Point& p) {
    const SplitJets j = split_jets(s, p, 0);
    return {values(j.dpi), values(j.vertical), values(j.horizontal), values(j.lift), values(j.proj_v), values(j.proj_h)};
}

Vector horizontal_lift(const SubmersionSetup& s, const Point& p, const Vector& w) { return split(s, p).lift * w; }

Vector dphi(const SubmersionSetup& s, const Point& p) {
    Vector g = Vector::Zero(s.n());
    if (!s.phi) return g;
    const JetD j = s.phi->eval(p, 1);
    if (!j.is_constant())
        for (int i = 0; i < s.n(); ++i) g[i] = j.d(i);
    return g;
}

Vector fundamental_T(const SubmersionSetup& s, const ConnectionField& conn, const Point& p, const Vector& e,
                     const Vector& f, const Extension&, const Extension& ext_f) {
    return tensor_T(make_frame(s, conn, p), e, f, ext_f);
}

Vector fundamental_A(const SubmersionSetup& s, const ConnectionField& conn, const Point& p, const Vector& e,
                     const Vector& f, const Extension&, const Extension& ext_f) {
    return tensor_A(make_frame(s, conn, p), e, f, ext_f);
}

Vector s_tensor(const ConnectionField& conn, const ConnectionField& dual, const Point& p, const Vector& v,
                const Vector& x) {
    return contract(values(conn.eval(p, 0)), v, x) - contract(values(dual.eval(p, 0)), v, x);
}

Vector lifted_covariant(const SubmersionSetup& s, const ConnectionField& conn, const Point& p, int a, int b) {
    return lifted_cov(make_frame(s, conn, p), a, b);
}

double conformal_defect(const SubmersionSetup& s, const ConnectionField& conn, const ConnectionField& base_conn,
                        const Point& p, int a, int b, int c) {
    const Frame f = make_frame(s, conn, p);
    return defect(f, values(base_conn.eval(f.b, 0)), a, b, c);
}

double conformal_defect_max(const SubmersionSetup& s, const ConnectionField& conn,
                            const ConnectionField& base_conn, const Point& p) {
    return defect_max(s, make_frame(s, conn, p), base_conn);
}

Point fiber_point(const SubmersionSetup& s, const Point& p, const Vector& vertical) {
    Point x = p;
    for (std::size_t c = 0; c < s.vertical_coords.size(); ++c)
        x[s.vertical_coords[c]] = vertical[static_cast<Eigen::Index>(c)];
    return solve_pivots(s, x, project(s, p));
}

JetVector solve_on_fiber(const SubmersionSetup& s, const std::vector<JetD>& vertical,
                         const std::vector<JetD>& target, const Point& guess, int order) {
    const int n = s.n(), m = s.m();
    int vars = 0;
    for (const auto& j : vertical)
        if (!j.is_constant()) vars = j.dim();
    for (const auto& j : target)
        if (!j.is_constant()) vars = j.dim();

    Point x0 = guess;
    Point b(m);
    for (int a = 0; a < m; ++a) b[a] = target[static_cast<std::size_t>(a)].value();
    for (std::size_t c = 0; c < s.vertical_coords.size(); ++c) x0[s.vertical_coords[c]] = vertical[c].value();
    x0 = solve_pivots(s, x0, b);

    JetVector x(n);
    for (std::size_t c = 0; c < s.vertical_coords.size(); ++c)
        x[s.vertical_coords[c]] = normalized(vertical[c], vars, order);
    for (int piv : s.pivots) x[piv] = JetD(vars, order, x0[piv]);
    if (order == 0 || vars == 0) return x;

    const Matrix block_inv = inverse(pivot_block(dpi_values(s, x0), s.pivots));
    const JetVector pj = s.map.eval(x0, order);
    for (int it = 0; it <= order; ++it) {
        const std::vector<JetD> in(x.data(), x.data() + n);
        JetVector r(m);
        for (int a = 0; a < m; ++a)
            r[a] = compose(normalized(pj[a], n, order), std::span<const JetD>(in)) -
                   normalized(target[static_cast<std::size_t>(a)], vars, order);
        for (int c = 0; c < m; ++c) {
            JetD step(vars, order, 0.0);
            for (int a = 0; a < m; ++a) step += block_inv(c, a) * r[a];
            JetD& xc = x[s.pivots[static_cast<std::size_t>(c)]];
            xc -= step;
            xc.value_ref() = x0[s.pivots[static_cast<std::size_t>(c)]];
        }
    }
    return x;
}

FiberChart fiber_chart(const SubmersionSetup& s, const ConnectionField& conn, const Point& p) {
    const int n = s.n(), k = n - s.m();
    FiberChart fc;
    fc.point = p;
    fc.basis = Matrix(n, k);
    fc.metric = JetMatrix(k, k);
    fc.connection = Christoffel(k);
    if (k == 0) return fc;

    Point y(k);
    for (int c = 0; c < k; ++c) y[c] = p[s.vertical_coords[static_cast<std::size_t>(c)]];
    const auto vertical = seed_all<double>(std::span<const double>(y.data(), static_cast<std::size_t>(k)), 2);
    const Point b = project(s, p);
    std::vector<JetD> target;
    for (int a = 0; a < s.m(); ++a) target.emplace_back(k, 2, b[a]);
    const JetVector iota = solve_on_fiber(s, vertical, target, p, 2);

    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) fc.basis(i, a) = iota[i].d(a);

    const JetMatrix g = compose_all(s.total.metric.eval(p, 1), iota);
    JetMatrix d(n, k);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) d(i, a) = iota[i].derivative(a).truncated(1);
    fc.metric = d.transpose() * g * d;

    const Christoffel gamma = values(conn.eval(p, 0));
    const Matrix pv = values(split_jets(s, p, 0).proj_v);
    for (int a = 0; a < k; ++a)
        for (int bb = 0; bb < k; ++bb) {
            Vector w(n);
            for (int i = 0; i < n; ++i) w[i] = iota[i].d(a, bb);
            w += contract(gamma, Vector(fc.basis.col(a)), Vector(fc.basis.col(bb)));
            const Vector vw = pv * w;
            for (int c = 0; c < k; ++c) fc.connection(c, a, bb) = vw[s.vertical_coords[static_cast<std::size_t>(c)]];
        }
    return fc;
}

MetricField induced_metric(const SubmersionSetup& s, const Point& through) {
    const int m = s.m();
    return {m, m, m, [s, through](const Point& b, int order) {
                const JetVector x = section(s, b, through, order);
                Point x0(s.n());
                for (int i = 0; i < s.n(); ++i) x0[i] = x[i].value();
                const SplitJets sj = split_jets(s, x0, order);
                const JetMatrix g = s.total.metric.eval(x0, order);
                const JetMatrix gt = sj.lift.transpose() * g * sj.lift;
                if (order == 0) return gt;
                return compose_all(gt, x);
            }};
}

ConnectionField induced_connection(const SubmersionSetup& s, const Point& through) {
    const int m = s.m();
    return {m, [s, through, m](const Point& b, int order) {
                const int n = s.n();
                const JetVector x = section(s, b, through, order);
                Point x0(n);
                for (int i = 0; i < n; ++i) x0[i] = x[i].value();
                const SplitJets sj = split_jets(s, x0, order + 1);
                const JetChristoffel gamma = s.total.connection.eval(x0, order);
                const JetMatrix dpi = truncated(sj.dpi, order);
                const std::vector<JetD> in(x.data(), x.data() + n);
                JetChristoffel out(m);
                for (int a = 0; a < m; ++a)
                    for (int bb = 0; bb < m; ++bb) {
                        const JetVector w = dpi * covariant_derivative(gamma, JetVector(sj.lift.col(a)), JetVector(sj.lift.col(bb)));
                        for (int c = 0; c < m; ++c)
                            out(c, a, bb) = order == 0 ? JetD(m, 0, w[c].value())
                                                       : compose(normalized(w[c], n, order), std::span<const JetD>(in));
                    }
                return out;
            }};
}

InducedStructures induced_structures(const SubmersionSetup& s, const Point& b, const Point& through) {
    InducedStructures out;
    Point x = through;
    out.fiber_point = solve_pivots(s, x, b);
    out.metric = values(induced_metric(s, through).eval(b, 0));
    out.connection = values(induced_connection(s, through).eval(b, 0));
    return out;
}

CheckResult check_split(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    const int n = s.n(), m = s.m();
    return evaluate_samples("split", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const SplitBasis sp = split(s, p);
        sink.record("sum", inf_norm(sp.proj_v + sp.proj_h - Matrix::Identity(n, n)));
        sink.record("idempotent", inf_norm(sp.proj_v * sp.proj_v - sp.proj_v));
        sink.record("kernel", inf_norm(sp.dpi * sp.proj_v));
        sink.record("vertical_basis", inf_norm(sp.dpi * sp.vertical));
        sink.record("lift", inf_norm(sp.dpi * sp.lift - Matrix::Identity(m, m)));
    });
}

CheckResult check_semi_riemannian(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    return evaluate_samples("semi_riemannian", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const SplitBasis sp = split(s, p);
        const Matrix g = values(s.total.metric.eval(p, 0));
        const Matrix gb = values(s.base.metric.eval(project(s, p), 0));
        sink.record("horizontal_isometry", inf_norm(sp.lift.transpose() * g * sp.lift - gb));
        if (sp.vertical.cols() > 0) {
            const Matrix gf = sp.vertical.transpose() * g * sp.vertical;
            const double det = gf.determinant();
            sink.record("fiber_degenerate", std::abs(det) > 1e-12 ? 0.0 : 1.0);
        }
    });
}

CheckResult check_tensoriality(const SubmersionSetup& s, const std::vector<Point>& samples, double tol,
                               std::uint64_t seed) {
    const int n = s.n();
    std::mt19937_64 rng(seed ^ 0x5eed7e45u);
    auto draw = [&rng](Eigen::Index rows, Eigen::Index cols) {
        Matrix out(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = 2.0 * unit_random(rng) - 1.0;
        return out;
    };
    return evaluate_samples("tensoriality", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Frame f = make_frame(s, s.total.connection, p);
        const Vector e = draw(n, 1), v = draw(n, 1);
        const Extension other{draw(n, n)};
        const double scale = 1.0 + inf_norm(tensor_T(f, e, v, {})) + inf_norm(tensor_A(f, e, v, {}));
        sink.record("T", inf_norm(tensor_T(f, e, v, {}) - tensor_T(f, e, v, other)) / scale);
        sink.record("A", inf_norm(tensor_A(f, e, v, {}) - tensor_A(f, e, v, other)) / scale);
        sink.record("T_of_horizontal", inf_norm(tensor_T(f, f.proj_h * e, v, {})));
        sink.record("A_of_vertical", inf_norm(tensor_A(f, f.proj_v * e, v, {})));
        sink.record("T_reverses", inf_norm(f.proj_v * tensor_T(f, e, f.proj_v * v, {})) +
                                      inf_norm(f.proj_h * tensor_T(f, e, f.proj_h * v, {})));
        sink.record("A_reverses", inf_norm(f.proj_v * tensor_A(f, e, f.proj_v * v, {})) +
                                      inf_norm(f.proj_h * tensor_A(f, e, f.proj_h * v, {})));
    });
}

CheckResult check_gauss_weingarten(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    const int m = s.m(), k = s.n() - s.m();
    return evaluate_samples("gauss_weingarten", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Frame f = make_frame(s, s.total.connection, p);
        auto vfield = [&f](int c) { return JetVector(f.jets.vertical.col(c)); };
        auto hfield = [&f](int a) { return JetVector(f.jets.lift.col(a)); };
        auto vval = [&f](int c) { return Vector(f.vertical.col(c)); };
        auto hval = [&f](int a) { return Vector(f.lift.col(a)); };
        for (int c = 0; c < k; ++c) {
            for (int d = 0; d < k; ++d) {
                const Vector nab = covariant_derivative(f.gamma, vval(c), vfield(d));
                sink.record("vertical_vertical", inf_norm(nab - tensor_T(f, vval(c), vval(d), {}) - f.proj_v * nab));
            }
            for (int a = 0; a < m; ++a) {
                const Vector vx = covariant_derivative(f.gamma, vval(c), hfield(a));
                sink.record("vertical_horizontal", inf_norm(vx - f.proj_h * vx - tensor_T(f, vval(c), hval(a), {})));
                const Vector xv = covariant_derivative(f.gamma, hval(a), vfield(c));
                sink.record("horizontal_vertical", inf_norm(xv - f.proj_v * xv - tensor_A(f, hval(a), vval(c), {})));
            }
        }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const Vector xy = covariant_derivative(f.gamma, hval(a), hfield(b));
                sink.record("horizontal_horizontal", inf_norm(xy - f.proj_h * xy - tensor_A(f, hval(a), hval(b), {})));
            }
    });
}

CheckResult check_projectable(const SubmersionSetup& s, const std::vector<Point>& samples, double tol,
                              int fiber_count) {
    const int m = s.m(), k = s.n() - s.m();
    int short_fibers = 0;
    auto result = evaluate_samples("projectable", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        if (k == 0) {
            sink.record("fiber_spread", 0.0);
            return;
        }
        std::vector<std::vector<double>> seen;
        for (int t = 0; t < fiber_count; ++t) {
            Vector y(k);
            for (int c = 0; c < k; ++c) {
                const auto [lo, hi] = s.total.box.intervals[static_cast<std::size_t>(s.vertical_coords[static_cast<std::size_t>(c)])];
                y[c] = lo + (hi - lo) * (t + 0.5) / fiber_count;
            }
            Point x;
            try {
                x = fiber_point(s, p, y);
            } catch (const RankDrop&) {
                continue;
            }
            if (!s.total.box.contains(x)) continue;
            const Frame f = make_frame(s, s.total.connection, x);
            std::vector<double> proj;
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    const Vector w = f.dpi * lifted_cov(f, a, b);
                    proj.insert(proj.end(), w.data(), w.data() + w.size());
                }
            seen.push_back(std::move(proj));
        }
        if (seen.size() < 2) {
            ++short_fibers;
            return;
        }
        double spread = 0.0;
        for (std::size_t i = 1; i < seen.size(); ++i)
            for (std::size_t j = 0; j < seen[i].size(); ++j) spread = std::max(spread, std::abs(seen[i][j] - seen[0][j]));
        sink.record("fiber_spread", spread);
    });
    if (k == 0) {
        result.notes.push_back("fibers are points; projectable by convention");
    } else if (short_fibers == result.samples && result.status != Status::Error) {
        result.status = Status::Inconclusive;
        result.notes.push_back("fewer than two fiber points inside the box");
    }
    return result;
}

CheckResult check_affine_hd(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    const int m = s.m();
    return evaluate_samples("affine_hd", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Frame f = make_frame(s, s.total.connection, p);
        const Christoffel bg = values(s.base.connection.eval(f.b, 0));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Vector star(m);
                for (int c = 0; c < m; ++c) star[c] = bg(c, a, b);
                sink.record("horizontal_part", inf_norm(f.proj_h * lifted_cov(f, a, b) - f.lift * star));
            }
    });
}

CheckResult theorem21_verify(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    const int m = s.m();
    const auto premise = is_statistical(s.total.connection, s.total.metric, samples, tol);
    auto result = evaluate_samples("theorem21", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Point b = project(s, p);
        const MetricField gt = induced_metric(s, p);
        const ConnectionField conn = induced_connection(s, p);
        sink.record("base_statistical", statistical_residual(conn, gt, b));
        const CubicForm base_c = nabla_g(conn, gt, b);
        const CubicForm total_c = nabla_g(s.total.connection, s.total.metric, p);
        const Matrix lift = split(s, p).lift;
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int bb = 0; bb < m; ++bb)
                for (int c = 0; c < m; ++c)
                    worst = std::max(worst, std::abs(base_c(a, bb, c) - contract(total_c, Vector(lift.col(a)),
                                                                                  Vector(lift.col(bb)), Vector(lift.col(c)))));
        sink.record("proof_identity", worst);
    });
    if (premise.status != Status::Pass && result.status != Status::Error) {
        result.status = Status::PremiseFailed;
        result.notes.push_back("total space is not statistical");
    }
    return result;
}

CheckResult check_conformal_metric(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    if (!s.phi) {
        CheckResult r;
        r.name = "conformal_metric";
        r.tolerance = tol;
        r.status = Status::Inconclusive;
        r.notes.push_back("no conformal factor configured");
        return r;
    }
    return evaluate_samples("conformal_metric", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Frame f = make_frame(s, s.total.connection, p);
        sink.record("horizontal_conformality", inf_norm(f.lift.transpose() * f.g * f.lift - std::exp(2.0 * f.phi) * f.gb));
    });
}

CheckResult check_conformal_defect(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    return evaluate_samples("conformal_defect", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        sink.record("defect", conformal_defect_max(s, s.total.connection, s.base.connection, p));
    });
}

CheckResult check_dual_conformal_pair(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    const ConnectionField dual = dual_connection(s.total.connection, s.total.metric);
    const ConnectionField base_dual = dual_connection(s.base.connection, s.base.metric);
    auto result = evaluate_samples("dual_conformal_pair", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        sink.record("primal", conformal_defect_max(s, s.total.connection, s.base.connection, p));
        sink.record("dual", conformal_defect_max(s, dual, base_dual, p));
    });
    if (result.status == Status::Pass || result.status == Status::Fail) {
        const bool primal = result.components["primal"] <= tol, dual_ok = result.components["dual"] <= tol;
        result.status = primal == dual_ok ? Status::Pass : Status::Fail;
        result.notes.push_back(std::string("primal ") + (primal ? "holds" : "fails") + ", dual " +
                               (dual_ok ? "holds" : "fails"));
    }
    return result;
}

std::vector<std::pair<std::string, double>> lemma_components(const SubmersionSetup& s, const Point& p) {
    const int m = s.m(), k = s.n() - s.m();
    const ConnectionField dual = dual_connection(s.total.connection, s.total.metric);
    const Frame f = make_frame(s, s.total.connection, p);
    const Frame fd = make_frame(s, dual, p);
    const CubicForm c = nabla_g(s.total.connection, s.total.metric, p);
    const CubicForm cb = nabla_g(s.base.connection, s.base.metric, f.b);
    const Christoffel diff = [&] {
        Christoffel d = f.gamma;
        for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= fd.gamma.data()[i];
        return d;
    }();
    const double conf = std::exp(2.0 * f.phi);
    auto X = [&f](int a) { return Vector(f.lift.col(a)); };
    auto V = [&f](int c) { return Vector(f.vertical.col(c)); };
    auto g = [&f](const Vector& a, const Vector& b) { return a.dot(f.g * b); };

    double cs6 = 0, cs7 = 0, cs8 = 0, cs9 = 0, cs10 = 0, cs11 = 0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int e = 0; e < m; ++e) cs6 = std::max(cs6, std::abs(contract(c, X(a), X(b), X(e)) - conf * cb(a, b, e)));
    for (int v = 0; v < k; ++v) {
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                cs7 = std::max(cs7, std::abs(contract(c, V(v), X(a), X(b)) + g(contract(diff, V(v), X(a)), X(b))));
                cs8 = std::max(cs8, std::abs(contract(c, X(a), V(v), X(b)) + g(tensor_A(f, X(a), V(v), {}), X(b)) -
                                             g(tensor_A(fd, X(a), V(v), {}), X(b))));
            }
            for (int w = 0; w < k; ++w) {
                cs9 = std::max(cs9, std::abs(contract(c, X(a), V(v), V(w)) + g(contract(diff, X(a), V(v)), V(w))));
                cs10 = std::max(cs10, std::abs(contract(c, V(v), X(a), V(w)) + g(tensor_T(f, V(v), X(a), {}), V(w)) -
                                               g(tensor_T(fd, V(v), X(a), {}), V(w))));
            }
        }
    }
    if (k > 0) {
        const FiberChart fc = fiber_chart(s, s.total.connection, p);
        const CubicForm ch = cubic_form(fc.metric, fc.connection);
        for (int u = 0; u < k; ++u)
            for (int v = 0; v < k; ++v)
                for (int w = 0; w < k; ++w)
                    cs11 = std::max(cs11, std::abs(contract(c, Vector(fc.basis.col(u)), Vector(fc.basis.col(v)),
                                                            Vector(fc.basis.col(w))) -
                                                   ch(u, v, w)));
    }
    return {{"cs6", cs6}, {"cs7", cs7}, {"cs8", cs8}, {"cs9", cs9}, {"cs10", cs10}, {"cs11", cs11}};
}

CheckResult check_lemma_components(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    return evaluate_samples("lemma_components", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        for (const auto& [name, value] : lemma_components(s, p)) sink.record(name, value);
    });
}

FourConditions four_conditions(const SubmersionSetup& s, const Point& p) {
    const int m = s.m(), k = s.n() - s.m();
    const ConnectionField dual = dual_connection(s.total.connection, s.total.metric);
    const Frame f = make_frame(s, s.total.connection, p);
    const Frame fd = make_frame(s, dual, p);
    Christoffel diff = f.gamma;
    for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= fd.gamma.data()[i];

    FourConditions out;
    for (int v = 0; v < k; ++v)
        for (int a = 0; a < m; ++a) {
            const Vector V = f.vertical.col(v), X = f.lift.col(a);
            const Vector one = f.proj_h * contract(diff, V, X) - (tensor_A(f, X, V, {}) - tensor_A(fd, X, V, {}));
            const Vector two = f.proj_v * contract(diff, X, V) - (tensor_T(f, V, X, {}) - tensor_T(fd, V, X, {}));
            out.horizontal_s = std::max(out.horizontal_s, inf_norm(one));
            out.vertical_s = std::max(out.vertical_s, inf_norm(two));
        }
    if (k > 0) out.fiber = fiber_statistical_residual(fiber_chart(s, s.total.connection, p));
    out.base = statistical_residual(s.base.connection, s.base.metric, f.b);
    return out;
}

CheckResult four_conditions_check(const SubmersionSetup& s, const std::vector<Point>& samples, double tol) {
    auto result = evaluate_samples("four_conditions", "", samples, tol, [&](const Point& p, ResidualSink& sink) {
        const Frame f = make_frame(s, s.total.connection, p);
        sink.record("premise_torsion", max_abs(torsion(s.total.connection, p)));
        sink.record("premise_conformal_hd", defect_max(s, f, s.base.connection));
        sink.record("premise_orthogonal", inf_norm(f.lift.transpose() * f.g * f.vertical));
        const FourConditions c = four_conditions(s, p);
        sink.record("condition1", c.horizontal_s);
        sink.record("condition2", c.vertical_s);
        sink.record("condition3", c.fiber);
        sink.record("condition4", c.base);
    });
    if (result.status != Status::Pass && result.status != Status::Fail) return result;
    const auto statistical = is_statistical(s.total.connection, s.total.metric, samples, tol);
    const bool conditions = result.max_residual <= tol;
    const bool stat = statistical.passed();
    result.status = conditions == stat ? Status::Pass : Status::Fail;
    result.notes.push_back(std::string("premises and conditions ") + (conditions ? "hold" : "fail") +
                           "; total space " + (stat ? "statistical" : "not statistical"));
    return result;
}

}  // namespace subgeo
