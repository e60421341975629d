#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qecov/codes.hpp"
#include "qecov/common.hpp"

namespace qecov::measures {

/// How codeword_overlap averages over the Bloch sphere.
struct SphereSampling {
    enum class Scheme { quadrature, monte_carlo };
    Scheme scheme = Scheme::quadrature;
    int n_points = 1024;
    std::uint64_t seed = 0;  // monte_carlo only
};

struct OverlapResult {
    double value = 0.0;
    double stderr_ = 0.0;  // monte_carlo only
    int n_points = 0;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace detail

/// Uhlmann fidelity for qubit states via the two-dimensional closed form
/// F^2 = tr(rho sigma) + 2 sqrt(det rho det sigma). Internals run in long
/// double so that orthogonal pure pairs evaluate to ~1e-10 rather than the
/// double rounding floor ~1e-8.
inline double fidelity_2x2(const Mat2& rho, const Mat2& sigma) {
    using C = std::complex<long double>;
    auto at = [](const Mat2& m, int i, int j) {
        return C(m(i, j).real(), m(i, j).imag());
    };
    C tr = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) tr += at(rho, i, j) * at(sigma, j, i);
    const C dr = at(rho, 0, 0) * at(rho, 1, 1) - at(rho, 0, 1) * at(rho, 1, 0);
    const C ds = at(sigma, 0, 0) * at(sigma, 1, 1) - at(sigma, 0, 1) * at(sigma, 1, 0);
    long double f2 = tr.real() + 2.0L * std::sqrt(std::max(0.0L, dr.real() * ds.real()));
    f2 = std::min(std::max(f2, 0.0L), 1.0L);
    return double(std::sqrt(f2));
}

/// General Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) by
/// eigendecomposition. Inputs are validated as density operators.
inline double uhlmann_fidelity(const Mat& rho, const Mat& sigma, double tol = kStructuralTol) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    for (const Mat* m : {&rho, &sigma}) {
        const auto v = fock::check_density(*m, tol);
        if (!v.ok) throw std::invalid_argument("uhlmann_fidelity: invalid state: " + v.reason);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
    Mat sqrt_rho = es.eigenvectors() *
                   es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                   es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> em(sqrt_rho * sigma * sqrt_rho);
    double f = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(std::max(f, 0.0), 1.0);
}

namespace detail {

/// Average f(w, theta) over the uniform sphere measure sin w dw dtheta / 4pi.
/// Quadrature: Gauss-Legendre in cos w times uniform trapezoid in theta, with
/// n_side = round(sqrt(n_points)) nodes per axis. Reduction is pairwise in
/// index order (deterministic).
inline OverlapResult sphere_average(const std::function<double(double, double)>& f,
                                    const SphereSampling& s) {
    if (s.n_points < 1) throw std::invalid_argument("sphere_average: n_points must be >= 1");
    const double pi = 3.14159265358979323846;
    OverlapResult out;
    if (s.scheme == SphereSampling::Scheme::quadrature) {
        const int n_side = std::max(1, int(std::lround(std::sqrt(double(s.n_points)))));
        std::vector<double> z, wz;
        gauss_legendre(n_side, z, wz);
        std::vector<double> vals;
        vals.reserve(std::size_t(n_side) * n_side);
        for (int i = 0; i < n_side; ++i) {
            const double w = std::acos(z[i]);
            for (int j = 0; j < n_side; ++j) {
                const double theta = 2.0 * pi * (j + 0.5) / n_side;
                vals.push_back(0.5 * wz[i] / n_side * f(w, theta));
            }
        }
        out.value = pairwise_sum(vals);
        out.n_points = n_side * n_side;
    } else {
        std::mt19937_64 rng(s.seed);
        std::uniform_real_distribution<double> uz(-1.0, 1.0), ut(0.0, 2.0 * pi);
        std::vector<double> vals(s.n_points);
        for (int i = 0; i < s.n_points; ++i)
            vals[i] = f(std::acos(uz(rng)), ut(rng));
        const double mean = pairwise_sum(vals) / s.n_points;
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        out.value = mean;
        out.stderr_ = s.n_points > 1 ? std::sqrt(ss / (double(s.n_points) * (s.n_points - 1))) : 0.0;
        out.n_points = s.n_points;
    }
    return out;
}

}  // namespace detail

/// Codeword overlap: the Uhlmann fidelity between the decoded outputs of a
/// state and its Bloch antipode, averaged over the sphere. Outputs come from
/// the analytic forms (equivalent to the simulated recovery, which is
/// enforced by the test suite).
inline OverlapResult codeword_overlap(const codes::CodeSpec& code, double gamma,
                                      const SphereSampling& sampling = {}) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("codeword_overlap: gamma must lie in [0,1]");
    auto integrand = [&](double w, double theta) {
        const codes::BlochInput q{w, theta};
        const Mat2 rq = codes::closed_form_output(code, gamma, q, codes::Branch::q);
        const Mat2 rt = codes::closed_form_output(code, gamma, q, codes::Branch::q_tilde);
        return fidelity_2x2(rq, rt);
    };
    return detail::sphere_average(integrand, sampling);
}

/// Wootters concurrence of a two-qubit state. The eigenvalues of rho rhotilde
/// are taken from the Hermitian product sqrt(rho) rhotilde sqrt(rho), which
/// has the same spectrum.
inline double wootters_concurrence(const Mat4& rho, double tol = kStructuralTol) {
    const auto v = fock::check_density(rho, tol);
    if (!v.ok) throw std::invalid_argument("wootters_concurrence: invalid state: " + v.reason);
    Mat4 yy = Mat4::Zero();
    // sigma_y (x) sigma_y is real: antidiagonal (-1, 1, 1, -1)
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Mat4 rhotilde = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()));
    const Mat4 sqrt_rho = es.eigenvectors() *
                          es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                          es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Mat4> em(sqrt_rho * rhotilde * sqrt_rho);
    Eigen::Vector4d lam = em.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(lam.data(), lam.data() + 4);
    const double c = lam(3) - lam(2) - lam(1) - lam(0);
    return std::max(0.0, std::min(1.0, c));
}

/// Concurrence left after sending one half of (|0>|0_L> + |1>|1_L>)/sqrt(2)
/// through the encoded channel. The decoded state lives on 2x2 qubits, and
/// (id (x) E) applied to the Bell state is exactly half the Choi matrix.
inline double safeguarded_concurrence(const codes::CodeSpec& code, double gamma) {
    const Mat4 choi = codes::effective_choi(code, gamma);
    return wootters_concurrence(0.5 * choi);
}

}  // namespace qecov::measures
