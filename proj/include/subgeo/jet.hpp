#pragma once

// Truncated multivariate Taylor jets for forward-mode differentiation.
//
// A Jet<Scalar> of order K over `dim` independent variables carries the value
// of a function and all of its raw partial derivatives up to total degree K
// (K <= 3). Coefficients are NOT divided by factorials: d(i, j) is
// d^2 f / dx_i dx_j. Second and third derivative storage is the full
// (symmetric) dim^2 / dim^3 block so that lookups need no index sorting.
//
// A jet with dim() == 0 is a plain constant and promotes against any other
// jet. This makes Jet usable as an Eigen scalar (Eigen writes Scalar(0)).

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "subgeo/errors.hpp"

namespace subgeo {

inline constexpr int kMaxJetOrder = 3;

template <typename Scalar>
class Jet {
public:
    Jet() = default;
    Jet(Scalar value) : value_(value) {}  // NOLINT: implicit constant promotion

    Jet(int dim, int order, Scalar value) : dim_(dim), order_(order), value_(value) {
        if (order < 0 || order > kMaxJetOrder)
            throw ContractViolation("jet order " + std::to_string(order) + " outside 0..3");
        if (dim < 0) throw ContractViolation("negative jet dimension");
        allocate();
    }

    /// Jet of the coordinate function x^{var} at `point`.
    static Jet seed(std::span<const Scalar> point, int var, int order) {
        if (order < 1 || order > kMaxJetOrder)
            throw ContractViolation("seed order " + std::to_string(order) + " outside 1..3");
        const int n = static_cast<int>(point.size());
        if (var < 0 || var >= n) throw ContractViolation("seed variable index out of range");
        Jet j(n, order, point[static_cast<std::size_t>(var)]);
        j.d1_[static_cast<std::size_t>(var)] = Scalar(1);
        return j;
    }

    static Jet constant(int dim, int order, Scalar value) { return Jet(dim, order, value); }

    int dim() const { return dim_; }
    int order() const { return order_; }
    bool is_constant() const { return dim_ == 0; }

    Scalar value() const { return value_; }
    Scalar d(int i) const { return dim_ > 0 && order_ >= 1 ? d1_[idx(i)] : Scalar(0); }
    Scalar d(int i, int j) const { return dim_ > 0 && order_ >= 2 ? d2_[idx(i, j)] : Scalar(0); }
    Scalar d(int i, int j, int k) const { return dim_ > 0 && order_ >= 3 ? d3_[idx(i, j, k)] : Scalar(0); }

    Scalar& value_ref() { return value_; }
    Scalar& d1_ref(int i) { return d1_[idx(i)]; }

    /// Sets a second partial and its mirror.
    void set_d2(int i, int j, Scalar v) {
        d2_[idx(i, j)] = v;
        d2_[idx(j, i)] = v;
    }
    /// Sets a third partial and all index permutations.
    void set_d3(int i, int j, int k, Scalar v) {
        for (auto [a, b, c] : permutations(i, j, k)) d3_[idx(a, b, c)] = v;
    }

    /// The jet of d/dx_i, one order lower.
    Jet derivative(int i) const {
        if (dim_ == 0) return Jet(Scalar(0));
        if (order_ < 1) throw ContractViolation("cannot differentiate an order-0 jet");
        Jet r(dim_, order_ - 1, d1_[idx(i)]);
        for (int a = 0; a < dim_ && r.order_ >= 1; ++a) r.d1_[idx(a)] = d2_[idx(i, a)];
        if (r.order_ >= 2)
            for (int a = 0; a < dim_; ++a)
                for (int b = 0; b < dim_; ++b) r.d2_[idx(a, b)] = d3_[idx(i, a, b)];
        return r;
    }

    Jet truncated(int order) const {
        if (dim_ == 0 || order >= order_) return *this;
        Jet r(dim_, order, value_);
        if (order >= 1) r.d1_ = d1_;
        if (order >= 2) r.d2_ = d2_;
        return r;
    }

    /// Re-expresses the jet over `new_dim` variables; the old variables map to
    /// the first dim() new ones and the extra variables do not appear.
    Jet embedded(int new_dim) const {
        if (dim_ == 0) return *this;
        if (new_dim < dim_) throw ContractViolation("embedding into fewer variables");
        Jet r(new_dim, order_, value_);
        for (int i = 0; i < dim_; ++i) {
            if (order_ >= 1) r.d1_[r.idx(i)] = d1_[idx(i)];
            for (int j = 0; j < dim_ && order_ >= 2; ++j) {
                r.d2_[r.idx(i, j)] = d2_[idx(i, j)];
                for (int k = 0; k < dim_ && order_ >= 3; ++k) r.d3_[r.idx(i, j, k)] = d3_[idx(i, j, k)];
            }
        }
        return r;
    }

    /// Directional derivative sum_i v_i d/dx_i, one order lower.
    template <typename Vec>
    Jet directional(const Vec& v) const {
        if (dim_ == 0) return Jet(Scalar(0));
        Jet r = Jet(dim_, order_ - 1, Scalar(0));
        for (int i = 0; i < dim_; ++i)
            if (v[i] != Scalar(0)) r += derivative(i) * Jet(Scalar(v[i]));
        return r;
    }

    // -- arithmetic -----------------------------------------------------------

    Jet operator-() const {
        Jet r = *this;
        r.value_ = -r.value_;
        for (auto& c : r.d1_) c = -c;
        for (auto& c : r.d2_) c = -c;
        for (auto& c : r.d3_) c = -c;
        return r;
    }

    Jet& operator+=(const Jet& o) { return *this = add(*this, o, Scalar(1)); }
    Jet& operator-=(const Jet& o) { return *this = add(*this, o, Scalar(-1)); }
    Jet& operator*=(const Jet& o) { return *this = mul(*this, o); }
    Jet& operator/=(const Jet& o) { return *this = mul(*this, reciprocal(o)); }

    friend Jet operator+(const Jet& a, const Jet& b) { return add(a, b, Scalar(1)); }
    friend Jet operator-(const Jet& a, const Jet& b) { return add(a, b, Scalar(-1)); }
    friend Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }
    friend Jet operator/(const Jet& a, const Jet& b) { return mul(a, reciprocal(b)); }

    friend Jet operator+(const Jet& a, Scalar s) { return a + Jet(s); }
    friend Jet operator+(Scalar s, const Jet& a) { return a + Jet(s); }
    friend Jet operator-(const Jet& a, Scalar s) { return a - Jet(s); }
    friend Jet operator-(Scalar s, const Jet& a) { return Jet(s) - a; }
    friend Jet operator*(const Jet& a, Scalar s) { return a * Jet(s); }
    friend Jet operator*(Scalar s, const Jet& a) { return a * Jet(s); }
    friend Jet operator/(const Jet& a, Scalar s) { return a * Jet(Scalar(1) / s); }
    friend Jet operator/(Scalar s, const Jet& a) { return Jet(s) * reciprocal(a); }

    // Comparisons look at the value only (used by pivoting code).
    friend bool operator<(const Jet& a, const Jet& b) { return a.value_ < b.value_; }
    friend bool operator>(const Jet& a, const Jet& b) { return a.value_ > b.value_; }
    friend bool operator==(const Jet& a, const Jet& b) {
        return a.value_ == b.value_ && a.d1_ == b.d1_ && a.d2_ == b.d2_ && a.d3_ == b.d3_;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    /// f(a) given f and its first three derivatives at a.value().
    friend Jet apply(const Jet& a, Scalar f0, Scalar f1, Scalar f2, Scalar f3) {
        Jet r = a;
        r.value_ = f0;
        if (a.dim_ == 0) return r;
        const int n = a.dim_;
        if (a.order_ >= 1)
            for (int i = 0; i < n; ++i) r.d1_[a.idx(i)] = f1 * a.d1_[a.idx(i)];
        if (a.order_ >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    r.set_d2(i, j, f2 * a.d(i) * a.d(j) + f1 * a.d(i, j));
        if (a.order_ >= 3)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    for (int k = j; k < n; ++k)
                        r.set_d3(i, j, k,
                                 f3 * a.d(i) * a.d(j) * a.d(k) +
                                     f2 * (a.d(i, j) * a.d(k) + a.d(i, k) * a.d(j) + a.d(j, k) * a.d(i)) +
                                     f1 * a.d(i, j, k));
        return r;
    }

    friend Jet reciprocal(const Jet& a) {
        const Scalar x = a.value_;
        if (x == Scalar(0)) throw EvalDomain("division by zero");
        const Scalar r = Scalar(1) / x;
        return apply(a, r, -r * r, Scalar(2) * r * r * r, Scalar(-6) * r * r * r * r);
    }

private:
    int dim_ = 0;
    int order_ = kMaxJetOrder;
    Scalar value_ = Scalar(0);
    std::vector<Scalar> d1_, d2_, d3_;

    void allocate() {
        const auto n = static_cast<std::size_t>(dim_);
        d1_.assign(order_ >= 1 ? n : 0, Scalar(0));
        d2_.assign(order_ >= 2 ? n * n : 0, Scalar(0));
        d3_.assign(order_ >= 3 ? n * n * n : 0, Scalar(0));
    }

    std::size_t idx(int i) const { return static_cast<std::size_t>(i); }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * dim_ + j); }
    std::size_t idx(int i, int j, int k) const { return static_cast<std::size_t>((i * dim_ + j) * dim_ + k); }

    struct Triple {
        int a, b, c;
    };
    static std::array<Triple, 6> permutations(int i, int j, int k) {
        return {{{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}}};
    }

    static void check_compatible(const Jet& a, const Jet& b) {
        if (a.dim_ != b.dim_) throw ContractViolation("jet dimension mismatch");
    }

    static Jet add(const Jet& a, const Jet& b, Scalar sign) {
        if (b.dim_ == 0) {
            Jet r = a;
            r.value_ += sign * b.value_;
            return r;
        }
        if (a.dim_ == 0) {
            Jet r = sign == Scalar(1) ? b : -b;
            r.value_ += a.value_;
            return r;
        }
        check_compatible(a, b);
        const int order = std::min(a.order_, b.order_);
        Jet r(a.dim_, order, a.value_ + sign * b.value_);
        for (std::size_t i = 0; i < r.d1_.size(); ++i) r.d1_[i] = a.d1_[i] + sign * b.d1_[i];
        for (std::size_t i = 0; i < r.d2_.size(); ++i) r.d2_[i] = a.d2_[i] + sign * b.d2_[i];
        for (std::size_t i = 0; i < r.d3_.size(); ++i) r.d3_[i] = a.d3_[i] + sign * b.d3_[i];
        return r;
    }

    static Jet scale(const Jet& a, Scalar s) {
        Jet r = a;
        r.value_ *= s;
        for (auto& c : r.d1_) c *= s;
        for (auto& c : r.d2_) c *= s;
        for (auto& c : r.d3_) c *= s;
        return r;
    }

    static Jet mul(const Jet& a, const Jet& b) {
        if (b.dim_ == 0) return scale(a, b.value_);
        if (a.dim_ == 0) return scale(b, a.value_);
        check_compatible(a, b);
        const int n = a.dim_;
        const int order = std::min(a.order_, b.order_);
        const Scalar f = a.value_, g = b.value_;
        Jet r(n, order, f * g);
        if (order >= 1)
            for (int i = 0; i < n; ++i) r.d1_[r.idx(i)] = a.d(i) * g + f * b.d(i);
        if (order >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    r.set_d2(i, j, a.d(i, j) * g + a.d(i) * b.d(j) + a.d(j) * b.d(i) + f * b.d(i, j));
        if (order >= 3)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    for (int k = j; k < n; ++k)
                        r.set_d3(i, j, k,
                                 a.d(i, j, k) * g + a.d(i, j) * b.d(k) + a.d(i, k) * b.d(j) + a.d(j, k) * b.d(i) +
                                     a.d(i) * b.d(j, k) + a.d(j) * b.d(i, k) + a.d(k) * b.d(i, j) +
                                     f * b.d(i, j, k));
        return r;
    }
};

using JetD = Jet<double>;

// -- elementary functions -----------------------------------------------------

template <typename S>
Jet<S> exp(const Jet<S>& a) {
    const S e = std::exp(a.value());
    return apply(a, e, e, e, e);
}

template <typename S>
Jet<S> log(const Jet<S>& a) {
    const S x = a.value();
    if (!(x > S(0))) throw EvalDomain("log of non-positive value");
    const S r = S(1) / x;
    return apply(a, std::log(x), r, -r * r, S(2) * r * r * r);
}

template <typename S>
Jet<S> sqrt(const Jet<S>& a) {
    const S x = a.value();
    if (!(x > S(0))) throw EvalDomain("sqrt of non-positive value");
    const S s = std::sqrt(x);
    return apply(a, s, S(0.5) / s, S(-0.25) / (s * x), S(0.375) / (s * x * x));
}

template <typename S>
Jet<S> sin(const Jet<S>& a) {
    const S s = std::sin(a.value()), c = std::cos(a.value());
    return apply(a, s, c, -s, -c);
}

template <typename S>
Jet<S> cos(const Jet<S>& a) {
    const S s = std::sin(a.value()), c = std::cos(a.value());
    return apply(a, c, -s, -c, s);
}

template <typename S>
Jet<S> tanh(const Jet<S>& a) {
    const S t = std::tanh(a.value());
    const S d1 = S(1) - t * t;
    return apply(a, t, d1, S(-2) * t * d1, d1 * (S(6) * t * t - S(2)));
}

/// Integer power; negative exponents require a nonzero base.
template <typename S>
Jet<S> pow(const Jet<S>& a, int p) {
    const S x = a.value();
    if (p < 0 && x == S(0)) throw EvalDomain("negative power of zero");
    auto ipow = [x](int e) -> S {
        if (e == 0) return S(1);
        S r(1), b = e > 0 ? x : S(1) / x;
        for (int k = 0; k < std::abs(e); ++k) r *= b;
        return r;
    };
    const S ps = static_cast<S>(p);
    auto term = [&](S coeff, int e) { return coeff == S(0) ? S(0) : coeff * ipow(e); };
    return apply(a, ipow(p), term(ps, p - 1), term(ps * (ps - 1), p - 2), term(ps * (ps - 1) * (ps - 2), p - 3));
}

template <typename S>
S value(const Jet<S>& a) {
    return a.value();
}
inline double value(double a) { return a; }

/// Chain rule: outer is a jet in m variables evaluated at inner values, inner
/// holds m jets over n variables. Result is the jet of outer∘inner.
template <typename S>
Jet<S> compose(const Jet<S>& outer, std::span<const Jet<S>> inner) {
    if (outer.is_constant()) return outer;
    const int m = outer.dim();
    if (static_cast<int>(inner.size()) != m) throw ContractViolation("compose: arity mismatch");
    int n = 0, order = outer.order();
    for (const auto& y : inner) {
        if (!y.is_constant()) {
            n = y.dim();
            order = std::min(order, y.order());
        }
    }
    if (n == 0) return Jet<S>(outer.value());
    auto yd = [&](int a, int i) { return inner[static_cast<std::size_t>(a)].d(i); };
    auto ydd = [&](int a, int i, int j) { return inner[static_cast<std::size_t>(a)].d(i, j); };
    auto yddd = [&](int a, int i, int j, int k) { return inner[static_cast<std::size_t>(a)].d(i, j, k); };
    Jet<S> r(n, order, outer.value());
    if (order >= 1)
        for (int i = 0; i < n; ++i) {
            S s(0);
            for (int a = 0; a < m; ++a) s += outer.d(a) * yd(a, i);
            r.d1_ref(i) = s;
        }
    if (order >= 2)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                S s(0);
                for (int a = 0; a < m; ++a) {
                    s += outer.d(a) * ydd(a, i, j);
                    for (int b = 0; b < m; ++b) s += outer.d(a, b) * yd(a, i) * yd(b, j);
                }
                r.set_d2(i, j, s);
            }
    if (order >= 3)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    S s(0);
                    for (int a = 0; a < m; ++a) {
                        s += outer.d(a) * yddd(a, i, j, k);
                        for (int b = 0; b < m; ++b) {
                            s += outer.d(a, b) *
                                 (ydd(a, i, j) * yd(b, k) + ydd(a, i, k) * yd(b, j) + ydd(a, j, k) * yd(b, i));
                            for (int c = 0; c < m; ++c) s += outer.d(a, b, c) * yd(a, i) * yd(b, j) * yd(c, k);
                        }
                    }
                    r.set_d3(i, j, k, s);
                }
    return r;
}

/// Jets of all coordinate functions at `point`.
template <typename S>
std::vector<Jet<S>> seed_all(std::span<const S> point, int order) {
    std::vector<Jet<S>> out;
    out.reserve(point.size());
    for (int i = 0; i < static_cast<int>(point.size()); ++i) out.push_back(Jet<S>::seed(point, i, order));
    return out;
}

}  // namespace subgeo

namespace Eigen {

template <typename S>
struct NumTraits<subgeo::Jet<S>> : GenericNumTraits<S> {
    using Real = subgeo::Jet<S>;
    using NonInteger = subgeo::Jet<S>;
    using Nested = subgeo::Jet<S>;
    using Literal = subgeo::Jet<S>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 20,
        AddCost = 40,
        MulCost = 80,
    };
    static inline Real epsilon() { return Real(std::numeric_limits<S>::epsilon()); }
    static inline Real dummy_precision() { return Real(1e-12); }
    static inline int digits10() { return NumTraits<S>::digits10(); }
};

template <typename S, typename BinaryOp>
struct ScalarBinaryOpTraits<subgeo::Jet<S>, S, BinaryOp> {
    using ReturnType = subgeo::Jet<S>;
};
template <typename S, typename BinaryOp>
struct ScalarBinaryOpTraits<S, subgeo::Jet<S>, BinaryOp> {
    using ReturnType = subgeo::Jet<S>;
};

}  // namespace Eigen
