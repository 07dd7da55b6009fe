#include "subgeo/fields.hpp"

#include <cmath>

namespace subgeo {

namespace {

constexpr double kStep1 = 1e-5;
constexpr double kStep2 = 1e-4;
constexpr double kStep3 = 2e-3;

double step(double base, double x) { return base * (1.0 + std::abs(x)); }

Point shifted(const Point& p, int i, double h) {
    Point q = p;
    q[i] += h;
    return q;
}

using Values = std::function<std::vector<double>(const Point&)>;

// Second partial of every component at p, using step kStep2.
std::vector<double> second_difference(const Values& f, const Point& p, int i, int j) {
    const double hi = step(kStep2, p[i]), hj = step(kStep2, p[j]);
    if (i == j) {
        const auto a = f(shifted(p, i, hi)), b = f(p), c = f(shifted(p, i, -hi));
        std::vector<double> out(a.size());
        for (std::size_t s = 0; s < a.size(); ++s) out[s] = (a[s] - 2.0 * b[s] + c[s]) / (hi * hi);
        return out;
    }
    const auto pp = f(shifted(shifted(p, i, hi), j, hj));
    const auto pm = f(shifted(shifted(p, i, hi), j, -hj));
    const auto mp = f(shifted(shifted(p, i, -hi), j, hj));
    const auto mm = f(shifted(shifted(p, i, -hi), j, -hj));
    std::vector<double> out(pp.size());
    for (std::size_t s = 0; s < pp.size(); ++s) out[s] = (pp[s] - pm[s] - mp[s] + mm[s]) / (4.0 * hi * hj);
    return out;
}


template <typename Make>
auto leaf(int dim, DiffMode mode, std::vector<Expr> exprs, Make make) {
    // Returns a closure producing normalized jets for all expressions.
    return [dim, mode, exprs = std::move(exprs), make](const Point& p, int order) {
        std::vector<JetD> jets;
        jets.reserve(exprs.size());
        if (mode == DiffMode::Jet || order == 0) {
            if (order == 0) {
                for (const auto& e : exprs) jets.push_back(e ? JetD(dim, 0, eval_value(e, p)) : JetD(dim, 0, 0.0));
            } else {
                const auto coords = seed_all<double>(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), order);
                for (const auto& e : exprs) jets.push_back(e ? normalized(eval(e, coords), dim, order) : JetD(dim, order, 0.0));
            }
        } else {
            const auto values = [&exprs](const Point& q) {
                std::vector<double> out;
                out.reserve(exprs.size());
                for (const auto& e : exprs) out.push_back(e ? eval_value(e, q) : 0.0);
                return out;
            };
            jets = finite_difference_jets(values, p, order);
        }
        return make(jets);
    };
}

}  // namespace

JetD normalized(const JetD& j, int dim, int order) {
    if (j.is_constant()) return JetD(dim, order, j.value());
    return j.truncated(order);
}

std::vector<JetD> finite_difference_jets(const Values& values, const Point& p, int order) {
    const int n = static_cast<int>(p.size());
    const auto v0 = values(p);
    const std::size_t m = v0.size();
    std::vector<JetD> out;
    out.reserve(m);
    for (std::size_t s = 0; s < m; ++s) out.emplace_back(n, order, v0[s]);
    if (order >= 1)
        for (int i = 0; i < n; ++i) {
            const double h = step(kStep1, p[i]);
            const auto a = values(shifted(p, i, h)), b = values(shifted(p, i, -h));
            for (std::size_t s = 0; s < m; ++s) out[s].d1_ref(i) = (a[s] - b[s]) / (2.0 * h);
        }
    if (order >= 2)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const auto d = second_difference(values, p, i, j);
                for (std::size_t s = 0; s < m; ++s) out[s].set_d2(i, j, d[s]);
            }
    if (order >= 3)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    const double h = step(kStep3, p[k]);
                    const auto a = second_difference(values, shifted(p, k, h), i, j);
                    const auto b = second_difference(values, shifted(p, k, -h), i, j);
                    for (std::size_t s = 0; s < m; ++s) out[s].set_d3(i, j, k, (a[s] - b[s]) / (2.0 * h));
                }
    return out;
}

ScalarField scalar_field(Expr e, int dim, DiffMode mode) {
    return {dim, leaf(dim, mode, {std::move(e)}, [](const std::vector<JetD>& j) { return j[0]; })};
}

ScalarField constant_scalar(int dim, double v) {
    return {dim, [dim, v](const Point&, int order) { return JetD(dim, order, v); }};
}

MapField map_field(std::vector<Expr> components, int dim, DiffMode mode) {
    const int out = static_cast<int>(components.size());
    return {dim, out, leaf(dim, mode, std::move(components), [out](const std::vector<JetD>& j) {
                JetVector v(out);
                for (int i = 0; i < out; ++i) v[i] = j[static_cast<std::size_t>(i)];
                return v;
            })};
}

MatrixField matrix_field(std::vector<std::vector<Expr>> entries, int dim, DiffMode mode) {
    const int rows = static_cast<int>(entries.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(entries[0].size());
    std::vector<Expr> flat;
    for (const auto& r : entries) {
        if (static_cast<int>(r.size()) != cols) throw ContractViolation("ragged matrix field");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return {dim, rows, cols, leaf(dim, mode, std::move(flat), [rows, cols](const std::vector<JetD>& j) {
                JetMatrix m(rows, cols);
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) m(r, c) = j[static_cast<std::size_t>(r * cols + c)];
                return m;
            })};
}

MetricField metric_field(const std::vector<std::vector<Expr>>& entries, int dim, DiffMode mode) {
    if (static_cast<int>(entries.size()) != dim) throw ContractViolation("metric must be dim x dim");
    std::vector<Expr> upper;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) upper.push_back(entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return {dim, dim, dim, leaf(dim, mode, std::move(upper), [dim](const std::vector<JetD>& j) {
                JetMatrix m(dim, dim);
                std::size_t s = 0;
                for (int a = 0; a < dim; ++a)
                    for (int b = a; b < dim; ++b) {
                        m(a, b) = j[s];
                        m(b, a) = j[s];
                        ++s;
                    }
                return m;
            })};
}

MetricField constant_metric(const Matrix& g) {
    const int n = static_cast<int>(g.rows());
    return {n, n, n, [g, n](const Point&, int order) {
                JetMatrix m(n, n);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) m(a, b) = JetD(n, order, g(a, b));
                return m;
            }};
}

ConnectionField christoffel_field(std::vector<std::vector<std::vector<Expr>>> coeffs, int dim, DiffMode mode) {
    std::vector<Expr> flat;
    for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) flat.push_back(coeffs.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)));
    return {dim, leaf(dim, mode, std::move(flat), [dim](const std::vector<JetD>& j) {
                JetChristoffel g(dim);
                g.data() = j;
                return g;
            })};
}

ConnectionField flat_connection(int dim) {
    return {dim, [dim](const Point&, int order) { return JetChristoffel(dim, JetD(dim, order, 0.0)); }};
}

ConnectionField operator+(const ConnectionField& a, const ConnectionField& b) {
    if (a.dim != b.dim) throw ContractViolation("connection dimension mismatch");
    return {a.dim, [a, b](const Point& p, int order) {
                auto x = a.eval(p, order);
                const auto y = b.eval(p, order);
                for (std::size_t i = 0; i < x.data().size(); ++i) x.data()[i] += y.data()[i];
                return x;
            }};
}

ConnectionField scaled(const ConnectionField& a, double s) {
    return {a.dim, [a, s](const Point& p, int order) {
                auto x = a.eval(p, order);
                for (auto& v : x.data()) v = v * s;
                return x;
            }};
}

DerivativeAudit audit_derivatives(const std::function<std::vector<JetD>(const Point&, int)>& field,
                                  const std::vector<Point>& points, int max_order) {
    DerivativeAudit audit;
    const auto values = [&field](const Point& q) {
        const auto jets = field(q, 0);
        std::vector<double> out;
        out.reserve(jets.size());
        for (const auto& j : jets) out.push_back(j.value());
        return out;
    };
    for (const auto& p : points) {
        const auto jets = field(p, max_order);
        const int n = static_cast<int>(p.size());
        for (int i = 0; i < n; ++i) {
            const double h = 1e-6 * (1.0 + std::abs(p[i]));
            const auto a = values(shifted(p, i, h)), b = values(shifted(p, i, -h));
            for (std::size_t s = 0; s < jets.size(); ++s) {
                const double exact = jets[s].d(i);
                const double fd = (a[s] - b[s]) / (2.0 * h);
                audit.max_rel_first = std::max(audit.max_rel_first, std::abs(exact - fd) / std::max(1.0, std::abs(exact)));
            }
            for (int j = i; j < n && max_order >= 2; ++j) {
                const auto d = second_difference(values, p, i, j);
                for (std::size_t s = 0; s < jets.size(); ++s) {
                    const double exact = jets[s].d(i, j);
                    audit.max_rel_second =
                        std::max(audit.max_rel_second, std::abs(exact - d[s]) / std::max(1.0, std::abs(exact)));
                }
            }
        }
        ++audit.probes;
    }
    return audit;
}

std::function<std::vector<JetD>(const Point&, int)> flatten(const MatrixField& f) {
    return [f](const Point& p, int order) {
        const JetMatrix m = f.eval(p, order);
        std::vector<JetD> out;
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(normalized(m(r, c), f.dim, order));
        return out;
    };
}

std::function<std::vector<JetD>(const Point&, int)> flatten(const ConnectionField& f) {
    return [f](const Point& p, int order) {
        auto g = f.eval(p, order).data();
        for (auto& j : g) j = normalized(j, f.dim, order);
        return g;
    };
}

std::function<std::vector<JetD>(const Point&, int)> flatten(const MapField& f) {
    return [f](const Point& p, int order) {
        const JetVector v = f.eval(p, order);
        std::vector<JetD> out;
        for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(normalized(v[i], f.dim, order));
        return out;
    };
}

std::function<std::vector<JetD>(const Point&, int)> flatten(const ScalarField& f) {
    return [f](const Point& p, int order) { return std::vector<JetD>{normalized(f.eval(p, order), f.dim, order)}; };
}

}  // namespace subgeo
