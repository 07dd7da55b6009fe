#include "subgeo/linalg.hpp"

#include <cmath>
#include <utility>

namespace subgeo {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols) throw ContractViolation("matrix is not square");
}

}  // namespace

Vector solve_linear(const Matrix& a, const Vector& b) {
    require_square(a.rows(), a.cols());
    if (b.size() != a.rows()) throw ContractViolation("right-hand side has wrong length");
    if (a.size() == 0) return Vector(0);

    const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::PartialPivLU<Matrix> lu(a);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= 1e-12 * scale) || scale == 0.0) throw SingularMatrix("matrix is singular to working precision");
    return lu.solve(b);
}

Matrix inverse(const Matrix& a) {
    require_square(a.rows(), a.cols());
    const auto n = a.rows();
    Matrix out(n, n);
    for (Eigen::Index c = 0; c < n; ++c) out.col(c) = solve_linear(a, Vector::Unit(n, c));
    return out;
}

JetMatrix inverse(const JetMatrix& a) {
    require_square(a.rows(), a.cols());
    const auto n = a.rows();
    if (n == 0) return a;

    const Matrix v = values(a);
    const double scale = v.cwiseAbs().rowwise().sum().maxCoeff();
    if (scale == 0.0) throw SingularMatrix("zero matrix");

    JetMatrix work = a;
    JetMatrix inv = JetMatrix::Identity(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < n; ++r)
            if (std::abs(work(r, col).value()) > std::abs(work(pivot, col).value())) pivot = r;
        if (std::abs(work(pivot, col).value()) < 1e-12 * scale)
            throw SingularMatrix("matrix is singular to working precision");
        if (pivot != col) {
            work.row(pivot).swap(work.row(col));
            inv.row(pivot).swap(inv.row(col));
        }
        const JetD p = work(col, col);
        const JetD rp = reciprocal(p);
        for (Eigen::Index c = 0; c < n; ++c) {
            work(col, c) = work(col, c) * rp;
            inv(col, c) = inv(col, c) * rp;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col) continue;
            const JetD f = work(r, col);
            if (f.is_constant() && f.value() == 0.0) continue;
            for (Eigen::Index c = 0; c < n; ++c) {
                work(r, c) -= f * work(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

}  // namespace subgeo
