#pragma once

#include <Eigen/Dense>

#include <vector>

#include "subgeo/errors.hpp"
#include "subgeo/jet.hpp"

namespace subgeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using JetVector = VectorX<JetD>;
using JetMatrix = MatrixX<JetD>;

/// Solves A x = b by LU with partial pivoting.
///
/// Throws SingularMatrix when a pivot falls below 1e-12 * ||A||_inf.
Vector solve_linear(const Matrix& a, const Vector& b);

/// Inverse of a square matrix under the same singularity rule as solve_linear.
Matrix inverse(const Matrix& a);

/// Inverse of a matrix of jets by Gauss-Jordan elimination, pivoting on values.
JetMatrix inverse(const JetMatrix& a);

template <typename Scalar>
Eigen::MatrixXd values(const MatrixX<Jet<Scalar>>& m) {
    return m.unaryExpr([](const Jet<Scalar>& j) { return j.value(); });
}

template <typename Scalar>
Eigen::MatrixXd partials(const MatrixX<Jet<Scalar>>& m, int var) {
    return m.unaryExpr([var](const Jet<Scalar>& j) { return j.is_constant() ? Scalar(0) : j.d(var); });
}

/// Entry-wise d/dx_var, one order lower.
template <typename Derived>
auto derivative(const Eigen::MatrixBase<Derived>& m, int var) {
    using J = typename Derived::Scalar;
    return m.unaryExpr([var](const J& j) { return j.derivative(var); }).eval();
}

template <typename Derived>
auto truncated(const Eigen::MatrixBase<Derived>& m, int order) {
    using J = typename Derived::Scalar;
    return m.unaryExpr([order](const J& j) { return j.truncated(order); }).eval();
}

template <typename Derived>
auto embedded(const Eigen::MatrixBase<Derived>& m, int new_dim) {
    using J = typename Derived::Scalar;
    return m.unaryExpr([new_dim](const J& j) { return j.embedded(new_dim); }).eval();
}

/// Lifts a constant matrix to jets (constant jets promote in arithmetic).
inline JetMatrix as_jets(const Matrix& m) { return m.cast<JetD>(); }
inline JetVector as_jets(const Vector& v) { return v.cast<JetD>(); }

inline double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Dense rank-3 array of side n. For connections, (k, i, j) holds Γ^k_ij with
/// ∇_{∂i} ∂j = Γ^k_ij ∂k. For cubic forms, (i, j, k) holds C_ijk.
template <typename T>
class Array3 {
public:
    Array3() = default;
    explicit Array3(int n, T fill = T(0)) : n_(n), data_(static_cast<std::size_t>(n * n * n), fill) {}

    int size() const { return n_; }
    T& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
    const T& operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    template <typename F>
    auto map(F f) const {
        using U = decltype(f(std::declval<const T&>()));
        Array3<U> out(n_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = f(data_[i]);
        return out;
    }

private:
    int n_ = 0;
    std::vector<T> data_;
    std::size_t index(int a, int b, int c) const { return static_cast<std::size_t>((a * n_ + b) * n_ + c); }
};

/// Rank-4 array; curvature uses (k, l, i, j) for R(∂i, ∂j) ∂l = R^k_lij ∂k.
template <typename T>
class Array4 {
public:
    Array4() = default;
    explicit Array4(int n, T fill = T(0)) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), fill) {}

    int size() const { return n_; }
    T& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
    const T& operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
    const std::vector<T>& data() const { return data_; }

private:
    int n_ = 0;
    std::vector<T> data_;
    std::size_t index(int a, int b, int c, int d) const {
        return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
    }
};

using Christoffel = Array3<double>;
using JetChristoffel = Array3<JetD>;
using CubicForm = Array3<double>;
using Curvature = Array4<double>;

inline Christoffel values(const JetChristoffel& g) {
    return g.map([](const JetD& j) { return j.value(); });
}

template <typename T>
double max_abs(const Array3<T>& a) {
    double m = 0.0;
    for (const auto& v : a.data()) m = std::max(m, std::abs(value(v)));
    return m;
}

}  // namespace subgeo
