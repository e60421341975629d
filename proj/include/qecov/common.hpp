#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qecov {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Structural tolerance for state invariants (Hermiticity, trace, positivity).
inline constexpr double kStructuralTol = 1e-9;
/// Tolerance for exact algebraic identities (e.g. Kraus completeness).
inline constexpr double kAlgebraicTol = 1e-12;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Deterministic pairwise (tree) summation. The result depends only on the
/// element order, never on how the values were produced, so parallel
/// evaluation into an indexed buffer followed by this reduction is
/// reproducible.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double hermiticity_defect(const Mat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// min eigenvalue of a Hermitian matrix (input is symmetrized first).
inline double min_eigenvalue(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace qecov
