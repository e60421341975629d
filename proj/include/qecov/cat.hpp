#pragma once

#include <cmath>
#include <functional>

#include "qecov/measures.hpp"

namespace qecov::cat {

/// Orthogonal basis {|u>, |v>} for span{|alpha>, |-alpha>} (real alpha >= 0):
/// |+-alpha> = mu |u> -+ ... specifically |-alpha> = mu|u> - nu|v> and
/// |alpha> = mu|u> + nu|v>, with mu^2 + nu^2 = 1 and <alpha|-alpha> =
/// mu^2 - nu^2 = exp(-2 alpha^2).
struct CatBasis {
    double alpha;
    double mu;
    double nu;

    static CatBasis make(double alpha) {
        if (alpha < 0.0) throw std::invalid_argument("CatBasis: alpha must be >= 0");
        const double e = std::exp(-2.0 * alpha * alpha);
        return {alpha, std::sqrt(0.5 * (1.0 + e)), std::sqrt(0.5 * (1.0 - e))};
    }
};

/// Input state (sqrt(w)|-alpha> + e^{i theta} sqrt(1-w)|alpha>)/sqrt(N) with
/// the normalization forced by the non-orthogonal alphabet.
struct CatInput {
    double w;      // in [0, 1]
    double theta;  // in [0, 2 pi)
    double alpha;
};

inline double cat_norm_constant(const CatInput& q) {
    return 1.0 + 2.0 * std::sqrt(q.w * (1.0 - q.w)) * std::cos(q.theta) *
                     std::exp(-2.0 * q.alpha * q.alpha);
}

/// n_modes = 1 is direct transmission; odd n_modes >= 3 is the repetition
/// code over even/odd cat states that corrects floor((N-1)/2) loss-induced
/// phase flips.
struct CatCode {
    int n_modes;
    double alpha;
};

namespace detail {

// change of frame between coefficients over (|-alpha>, |alpha>) and the
// orthogonal {u, v} basis; T columns are the frame states in uv coordinates
inline Mat2 frame_to_uv_matrix(const CatBasis& b) {
    Mat2 t;
    t << b.mu, b.mu, -b.nu, b.nu;
    return t;
}

inline Mat2 uv_from_frame(const Mat2& frame_coeffs, const CatBasis& b) {
    const Mat2 t = frame_to_uv_matrix(b);
    return t * frame_coeffs * t.adjoint();
}

inline Mat2 frame_from_uv(const Mat2& rho_uv, const CatBasis& b) {
    Mat2 tinv;
    tinv << 0.5 / b.mu, -0.5 / b.nu, 0.5 / b.mu, 0.5 / b.nu;
    return tinv * rho_uv * tinv.adjoint();
}

inline Mat2 vacuum_projector() {
    Mat2 m = Mat2::Zero();
    m(0, 0) = 1.0;
    return m;
}

}  // namespace detail

struct LossyCatOutput {
    Mat2 rho;  // in the CatBasis of alpha_out
    double alpha_out;
};

/// Amplitude damping restricted to span{|alpha>, |-alpha>}: the amplitude
/// shrinks to alpha' = sqrt(1-gamma) alpha, frame populations are preserved
/// and the <alpha|.|-alpha> coherences pick up exp(-2 gamma alpha^2). Input
/// and output are expressed in the orthogonal CatBasis of their respective
/// amplitudes.
inline LossyCatOutput lossy_cat_mode(const Mat2& rho_uv, double alpha, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("lossy_cat_mode: gamma must lie in [0,1]");
    if (alpha < 0.0) throw std::invalid_argument("lossy_cat_mode: alpha must be >= 0");
    const double alpha_out = std::sqrt(1.0 - gamma) * alpha;
    if (alpha == 0.0) return {detail::vacuum_projector(), 0.0};
    if (gamma == 1.0) return {detail::vacuum_projector(), 0.0};
    const double kappa = std::exp(-2.0 * gamma * alpha * alpha);
    Mat2 frame = detail::frame_from_uv(rho_uv, CatBasis::make(alpha));
    frame(0, 1) *= kappa;
    frame(1, 0) *= kappa;
    return {detail::uv_from_frame(frame, CatBasis::make(alpha_out)), alpha_out};
}

/// Direct transmission of a coherent-state qubit, exact on the two-dimensional
/// span (cross-checked against the Fock-space Kraus simulation).
inline Mat2 cat_direct_pipeline(double alpha, double gamma, const CatInput& q) {
    if (q.w < 0.0 || q.w > 1.0)
        throw std::invalid_argument("cat_direct_pipeline: w must lie in [0,1]");
    if (alpha == 0.0) return detail::vacuum_projector();
    const double n = cat_norm_constant(q);
    const Complex a = std::sqrt(q.w / n);
    const Complex b = std::polar(std::sqrt((1.0 - q.w) / n), q.theta);
    Eigen::Vector2cd frame_vec;
    frame_vec << a, b;
    const Mat2 frame = frame_vec * frame_vec.adjoint();
    const CatBasis basis = CatBasis::make(alpha);
    return lossy_cat_mode(detail::uv_from_frame(frame, basis), alpha, gamma).rho;
}

/// Per-mode phase-flip probability induced by loss on a size-alpha cat:
/// p = (1 - exp(-2 gamma alpha^2)) / 2, exact on the coherence sector.
inline double flip_probability(double alpha, double gamma) {
    return 0.5 * (1.0 - std::exp(-2.0 * gamma * alpha * alpha));
}

/// Probability that majority vote over n_modes independent flips fails.
inline double residual_flip_probability(int n_modes, double p) {
    if (n_modes < 1 || n_modes % 2 == 0)
        throw std::invalid_argument("residual_flip_probability: n_modes must be odd");
    double binom = 1.0;  // C(n, k), exact in double for n <= 51
    double total = 0.0;
    for (int k = 0; k <= n_modes; ++k) {
        if (k >= (n_modes + 1) / 2)
            total += binom * std::pow(p, k) * std::pow(1.0 - p, n_modes - k);
        binom *= double(n_modes - k) / double(k + 1);
    }
    return total;
}

/// Plug-in for gate imperfections of the encoding scheme: an additional
/// per-mode flip probability on top of the channel-induced one. The default
/// (ideal gates) applies none.
struct GateErrorModel {
    std::function<double(double alpha, int n_modes)> extra_flip;
};

/// Repetition-code pipeline with ideal encode/decode gates: the logical
/// amplitudes over (|-alpha>, |alpha>) map onto the orthogonal cat-product
/// codewords, each mode flips independently with flip_probability, majority
/// vote corrects, and the decoded qubit lives at amplitude sqrt(1-gamma)
/// alpha. n_modes = 1 means no redundancy (the bare conjugate-basis qubit).
inline Mat2 gvr_pipeline(const CatCode& code, double gamma, const CatInput& q,
                         const GateErrorModel* gate_errors = nullptr) {
    if (code.n_modes < 1 || code.n_modes % 2 == 0)
        throw std::invalid_argument("gvr_pipeline: n_modes must be odd");
    if (q.w < 0.0 || q.w > 1.0)
        throw std::invalid_argument("gvr_pipeline: w must lie in [0,1]");
    double p = flip_probability(code.alpha, gamma);
    if (gate_errors && gate_errors->extra_flip) {
        const double pg = gate_errors->extra_flip(code.alpha, code.n_modes);
        p = p * (1.0 - pg) + pg * (1.0 - p);
    }
    const double p_logical = residual_flip_probability(code.n_modes, p);
    // renormalized logical amplitudes (the alphabet normalization cancels)
    Eigen::Vector2cd psi;
    psi << std::sqrt(q.w), std::polar(std::sqrt(1.0 - q.w), q.theta);
    const Mat2 pure = psi * psi.adjoint();
    Mat2 flipped;
    flipped << pure(1, 1), pure(1, 0), pure(0, 1), pure(0, 0);
    return (1.0 - p_logical) * pure + p_logical * flipped;
}

/// Concurrence left in (|alpha,alpha> - |-alpha,-alpha>)/sqrt(2-2e^{-4a^2})
/// when the second mode passes through the scheme. In the orthogonal basis
/// the input is exactly (|uv> + |vu>)/sqrt(2); the scheme acts as a logical
/// flip channel with the majority-vote residual probability.
inline double cat_concurrence(const CatCode& code, double gamma) {
    if (code.n_modes < 1 || code.n_modes % 2 == 0)
        throw std::invalid_argument("cat_concurrence: n_modes must be odd");
    const double p = flip_probability(code.alpha, gamma);
    const double p_logical = residual_flip_probability(code.n_modes, p);
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(1) = psi(2) = 1.0 / std::sqrt(2.0);  // (|uv> + |vu>)/sqrt(2)
    Mat4 rho = psi * psi.adjoint();
    Eigen::Vector4cd flipped = Eigen::Vector4cd::Zero();
    flipped(0) = flipped(3) = 1.0 / std::sqrt(2.0);  // (I x X) image
    rho = (1.0 - p_logical) * rho + p_logical * (flipped * flipped.adjoint());
    return measures::wootters_concurrence(rho);
}

/// Codeword overlap for the coherent-state codes. Antipodal pairs are drawn
/// on the logical Bloch sphere and then physically encoded: for direct
/// transmission the encoding is the non-orthogonal alphabet itself (so the
/// overlap stays finite even at gamma = 0 and tends to 1 as alpha -> 0),
/// while the repetition encoding maps onto orthogonal cat products.
inline measures::OverlapResult cat_codeword_overlap(
    const CatCode& code, double gamma, const measures::SphereSampling& sampling = {}) {
    if (code.n_modes < 1 || code.n_modes % 2 == 0)
        throw std::invalid_argument("cat_codeword_overlap: n_modes must be odd");
    auto integrand = [&](double w_bloch, double theta) {
        const double pi = 3.14159265358979323846;
        const double c = std::cos(w_bloch / 2);
        CatInput q{c * c, theta, code.alpha};
        CatInput qt{1.0 - c * c, theta + pi < 2 * pi ? theta + pi : theta - pi, code.alpha};
        Mat2 out_q, out_t;
        if (code.n_modes == 1) {
            out_q = cat_direct_pipeline(code.alpha, gamma, q);
            out_t = cat_direct_pipeline(code.alpha, gamma, qt);
        } else {
            out_q = gvr_pipeline(code, gamma, q);
            out_t = gvr_pipeline(code, gamma, qt);
        }
        return measures::fidelity_2x2(out_q, out_t);
    };
    return measures::detail::sphere_average(integrand, sampling);
}

}  // namespace qecov::cat
