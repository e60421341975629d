#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "qecov/common.hpp"

namespace qecov::gaussian {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using RMat2 = Eigen::Matrix2d;

/// J_n = direct sum of [[0,-1],[1,0]] blocks.
inline RMat symplectic_form(int n_modes) {
    RMat j = RMat::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        j(2 * m, 2 * m + 1) = -1.0;
        j(2 * m + 1, 2 * m) = 1.0;
    }
    return j;
}

/// Gaussian state in the convention where the vacuum CM is the identity;
/// displacements stay zero on every fidelity path.
struct GaussianState {
    RMat cm;
    RVec disp;

    int modes() const { return int(cm.rows()) / 2; }

    static GaussianState vacuum(int n_modes) {
        return {RMat::Identity(2 * n_modes, 2 * n_modes), RVec::Zero(2 * n_modes)};
    }
    static GaussianState thermal(double nbar) {
        return {(2.0 * nbar + 1.0) * RMat::Identity(2, 2), RVec::Zero(2)};
    }
};

struct StateValidity {
    bool ok;
    double min_eigenvalue;  // of sigma + i J
};

/// Uncertainty check: sigma = sigma^T and sigma + iJ >= 0 (within 1e-10).
inline StateValidity validate_state(const GaussianState& s) {
    const int n = int(s.cm.rows());
    if (n % 2 != 0 || s.cm.cols() != n) return {false, -1.0};
    if ((s.cm - s.cm.transpose()).cwiseAbs().maxCoeff() > 1e-10) return {false, -1.0};
    Mat herm = s.cm.cast<Complex>() + Complex(0.0, 1.0) * symplectic_form(n / 2).cast<Complex>();
    const double min_eig = min_eigenvalue(herm);
    return {min_eig >= -1e-10, min_eig};
}

/// CM map sigma -> M sigma M^T + N.
struct GaussianChannel {
    RMat m;
    RMat n_mat;

    static GaussianChannel identity(int n_modes) {
        return {RMat::Identity(2 * n_modes, 2 * n_modes),
                RMat::Zero(2 * n_modes, 2 * n_modes)};
    }
    static GaussianChannel loss(double gamma) {
        return {std::sqrt(1.0 - gamma) * RMat::Identity(2, 2),
                gamma * RMat::Identity(2, 2)};
    }
};

/// Complete positivity: N symmetric PSD and det N >= (det M - 1)^2.
inline bool is_cptp(const GaussianChannel& c) {
    if (c.m.rows() != c.m.cols() || c.n_mat.rows() != c.n_mat.cols() ||
        c.m.rows() != c.n_mat.rows())
        return false;
    if ((c.n_mat - c.n_mat.transpose()).cwiseAbs().maxCoeff() > 1e-10) return false;
    Eigen::SelfAdjointEigenSolver<RMat> es(c.n_mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) return false;
    const double dm = c.m.determinant();
    return c.n_mat.determinant() >= (dm - 1.0) * (dm - 1.0) - 1e-12;
}

inline GaussianState apply(const GaussianChannel& c, const GaussianState& s) {
    if (!is_cptp(c)) throw std::invalid_argument("apply: channel is not CPTP");
    if (c.m.cols() != s.cm.rows()) throw std::invalid_argument("apply: dimension mismatch");
    return {c.m * s.cm * c.m.transpose() + c.n_mat, c.m * s.disp};
}

namespace detail {

inline void require_single_mode_zero_mean(const GaussianState& s, const char* who) {
    if (s.cm.rows() != 2)
        throw std::invalid_argument(std::string(who) + ": only single-mode states supported");
    if (s.disp.size() > 0 && s.disp.cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument(std::string(who) + ": displacements must be zero");
}

// F = 2 / (sqrt(Delta + delta) - sqrt(delta)) in the cancellation-free form
// 2 (sqrt(Delta + delta) + sqrt(delta)) / Delta.
inline double scutaru_fidelity(double delta_big, double delta_small) {
    const double d = std::max(0.0, delta_small);
    const double f = 2.0 * (std::sqrt(delta_big + d) + std::sqrt(d)) / delta_big;
    return std::min(f, 1.0);
}

}  // namespace detail

/// Fidelity between two zero-mean single-mode Gaussian states,
/// F = 2/(sqrt(Delta+delta) - sqrt(delta)) with Delta = det(s1+s2) and
/// delta = (det s1 - 1)(det s2 - 1).
inline double gaussian_fidelity(const GaussianState& s1, const GaussianState& s2) {
    detail::require_single_mode_zero_mean(s1, "gaussian_fidelity");
    detail::require_single_mode_zero_mean(s2, "gaussian_fidelity");
    const double delta_big = (s1.cm + s2.cm).determinant();
    const double delta_small = (s1.cm.determinant() - 1.0) * (s2.cm.determinant() - 1.0);
    return detail::scutaru_fidelity(delta_big, delta_small);
}

/// Fidelity between the channel outputs, evaluated directly from (M, N):
/// Delta' = det(M s1 M^T + M s2 M^T + 2N), delta' from the output dets.
inline double fidelity_after_channel(const GaussianState& s1, const GaussianState& s2,
                                     const GaussianChannel& c) {
    detail::require_single_mode_zero_mean(s1, "fidelity_after_channel");
    detail::require_single_mode_zero_mean(s2, "fidelity_after_channel");
    if (!is_cptp(c)) throw std::invalid_argument("fidelity_after_channel: channel is not CPTP");
    const RMat o1 = c.m * s1.cm * c.m.transpose() + c.n_mat;
    const RMat o2 = c.m * s2.cm * c.m.transpose() + c.n_mat;
    const double delta_big = (o1 + o2).determinant();
    const double delta_small = (o1.determinant() - 1.0) * (o2.determinant() - 1.0);
    return detail::scutaru_fidelity(delta_big, delta_small);
}

/// Singular-value normal form M' = S V M U, N' = S V N V^T S with U, V
/// rotations and S a symplectic squeeze. For det M > 0 this reaches
/// M' = eta I with eta = sqrt(|det M|); for det M < 0 the reflection cannot
/// be absorbed symplectically and M' = diag(eta, -eta); for det M = 0,
/// M' = diag(s1, 0). Determinants of M and N are preserved.
struct NormalForm {
    GaussianChannel channel;
    RMat2 input_rotation;     // U, applied to inputs: sigma -> U^T? see below
    RMat2 output_symplectic;  // S V
    double eta;
};

inline NormalForm channel_normal_form(const GaussianChannel& c) {
    if (c.m.rows() != 2)
        throw std::invalid_argument("channel_normal_form: single-mode channels only");
    Eigen::JacobiSVD<RMat2> svd(c.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RMat2 u = svd.matrixU(), v = svd.matrixV();
    Eigen::Vector2d sig = svd.singularValues();
    RMat2 flip = RMat2::Identity();
    flip(1, 1) = -1.0;
    if (u.determinant() < 0.0) {
        u = u * flip;
        sig(1) = -sig(1);
    }
    if (v.determinant() < 0.0) {
        v = v * flip;
        sig(1) = -sig(1);
    }
    // now M = u diag(sig) v^T with u, v rotations
    RMat2 squeeze = RMat2::Identity();
    double eta = std::sqrt(std::abs(sig(0) * sig(1)));
    if (sig(1) != 0.0) {
        const double t = std::sqrt(std::abs(sig(1)) / std::abs(sig(0)));
        squeeze(0, 0) = t;
        squeeze(1, 1) = 1.0 / t;
    }
    RMat2 out_s = squeeze * u.transpose();
    RMat2 mp = out_s * c.m * v;
    if (mp(0, 0) < 0.0) {
        // absorb an overall rotation by pi (symplectic) into the output
        out_s = -out_s;
        mp = -mp;
    }
    NormalForm nf;
    nf.channel.m = mp;
    nf.channel.n_mat = out_s * c.n_mat * out_s.transpose();
    nf.input_rotation = v;
    nf.output_symplectic = out_s;
    nf.eta = eta;
    return nf;
}

/// Two-mode squeezed state CM [[cosh r I, sinh r Lambda], [sinh r Lambda,
/// cosh r I]] with Lambda = diag(1, -1); pure for every finite r.
inline GaussianState tmss_cm(double r) {
    if (r < 0.0) throw std::invalid_argument("tmss_cm: r must be >= 0");
    RMat cm = RMat::Zero(4, 4);
    const double a = std::cosh(r), c = std::sinh(r);
    cm.block<2, 2>(0, 0) = a * RMat2::Identity();
    cm.block<2, 2>(2, 2) = a * RMat2::Identity();
    RMat2 lam = RMat2::Identity();
    lam(1, 1) = -1.0;
    cm.block<2, 2>(0, 2) = c * lam;
    cm.block<2, 2>(2, 0) = c * lam;
    return {cm, RVec::Zero(4)};
}

/// Finite-r Choi CM of a single-mode channel:
/// [[M^T A_r M + N, M^T C_r], [C_r M, A_r]].
inline GaussianState choi_cm(const GaussianChannel& c, double r) {
    if (c.m.rows() != 2)
        throw std::invalid_argument("choi_cm: single-mode channels only");
    const double a = std::cosh(r), s = std::sinh(r);
    RMat2 lam = RMat2::Identity();
    lam(1, 1) = -1.0;
    const RMat2 a_r = a * RMat2::Identity();
    const RMat2 c_r = s * lam;
    RMat cm = RMat::Zero(4, 4);
    cm.block<2, 2>(0, 0) = c.m.transpose() * a_r * c.m + c.n_mat;
    cm.block<2, 2>(0, 2) = c.m.transpose() * c_r;
    cm.block<2, 2>(2, 0) = c_r * c.m;
    cm.block<2, 2>(2, 2) = a_r;
    return {cm, RVec::Zero(4)};
}

// ---------------------------------------------------------------------------
// randomized no-go verification
// ---------------------------------------------------------------------------

/// sigma = R(phi)^T diag((2nb+1)e^{2r}, (2nb+1)e^{-2r}) R(phi); valid by
/// construction.
inline GaussianState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unb(0.0, 3.0), ur(0.0, 1.5),
        uphi(0.0, 3.14159265358979323846);
    const double nb = unb(rng), r = ur(rng), phi = uphi(rng);
    RMat2 rot;
    rot << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    RMat2 d = RMat2::Zero();
    d(0, 0) = (2.0 * nb + 1.0) * std::exp(2.0 * r);
    d(1, 1) = (2.0 * nb + 1.0) * std::exp(-2.0 * r);
    return {rot.transpose() * d * rot, RVec::Zero(2)};
}

/// M with entries uniform in [-2,2]; N = O^T diag(n1,n2) O scaled so that
/// det N >= (det M - 1)^2, with equality when boundary is requested.
inline GaussianChannel random_channel(std::mt19937_64& rng, bool boundary) {
    std::uniform_real_distribution<double> um(-2.0, 2.0), un(0.05, 1.0),
        uphi(0.0, 3.14159265358979323846), uslack(0.0, 2.0);
    RMat2 m;
    m << um(rng), um(rng), um(rng), um(rng);
    const double n1 = un(rng), n2 = un(rng), phi = uphi(rng);
    const double slack = boundary ? 0.0 : uslack(rng);
    RMat2 rot;
    rot << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    const double dm = m.determinant();
    const double t = std::abs(dm - 1.0) / std::sqrt(n1 * n2) * (1.0 + slack);
    RMat2 d = RMat2::Zero();
    d(0, 0) = t * n1;
    d(1, 1) = t * n2;
    return {m, rot.transpose() * d * rot};
}

/// Random symplectic (det M = 1, N = 0): rotation * squeeze * rotation.
inline GaussianChannel random_symplectic_channel(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * 3.14159265358979323846),
        us(0.5, 2.0);
    auto rot = [](double phi) {
        RMat2 r;
        r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
        return r;
    };
    RMat2 sq = RMat2::Zero();
    const double s = us(rng);
    sq(0, 0) = s;
    sq(1, 1) = 1.0 / s;
    return {rot(uphi(rng)) * sq * rot(uphi(rng)), RMat2::Zero()};
}

struct NogoOptions {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 12345;
    double boundary_fraction = 0.2;    // channels with det N = (det M - 1)^2
    double symplectic_fraction = 0.1;  // det M = 1, N = 0
    bool symplectic_only = false;
};

struct StratumStats {
    std::size_t count = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    double max_abs_margin = 0.0;

    void add(double margin, double threshold) {
        ++count;
        if (margin < threshold) ++violations;
        if (margin < min_margin) min_margin = margin;
        if (std::abs(margin) > max_abs_margin) max_abs_margin = std::abs(margin);
    }
};

struct NogoReport {
    NogoOptions options;
    double threshold = -1e-9;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    StratumStats det_eq_one;   // |det M| = 1 (symplectic stratum)
    StratumStats det_gt_one;   // |det M| > 1
    StratumStats det_lt_one;   // |det M| < 1
    StratumStats boundary;     // quantum-limited det N = (det M - 1)^2
    StratumStats symplectic;   // N = 0, det M = 1

    std::string to_text() const;
};

/// Draw random valid state pairs and CPTP channels, compute the margin
/// F' - F for each, and count margins below the threshold (the no-go claim
/// is that none exist). Samples are allocated deterministically by index:
/// symplectic stratum first, then boundary channels, then general ones.
inline NogoReport verify_nogo(const NogoOptions& opt) {
    if (opt.n_samples < 1) throw std::invalid_argument("verify_nogo: n_samples must be >= 1");
    std::mt19937_64 rng(opt.seed);
    NogoReport rep;
    rep.options = opt;
    const std::size_t n_sympl =
        opt.symplectic_only ? opt.n_samples
                            : std::size_t(opt.symplectic_fraction * opt.n_samples);
    const std::size_t n_boundary =
        opt.symplectic_only ? 0 : std::size_t(opt.boundary_fraction * opt.n_samples);
    for (std::size_t i = 0; i < opt.n_samples; ++i) {
        const GaussianState s1 = random_state(rng), s2 = random_state(rng);
        GaussianChannel c;
        bool is_boundary = false;
        if (i < n_sympl) {
            c = random_symplectic_channel(rng);
        } else if (i < n_sympl + n_boundary) {
            c = random_channel(rng, true);
            is_boundary = true;
        } else {
            c = random_channel(rng, false);
        }
        const double f = gaussian_fidelity(s1, s2);
        const double fp = fidelity_after_channel(s1, s2, c);
        const double margin = fp - f;
        if (margin < rep.min_margin) rep.min_margin = margin;
        if (margin < rep.threshold) ++rep.violations;
        const double adm = std::abs(c.m.determinant());
        if (i < n_sympl)
            rep.symplectic.add(margin, rep.threshold);
        if (is_boundary) rep.boundary.add(margin, rep.threshold);
        if (std::abs(adm - 1.0) < 1e-12)
            rep.det_eq_one.add(margin, rep.threshold);
        else if (adm > 1.0)
            rep.det_gt_one.add(margin, rep.threshold);
        else
            rep.det_lt_one.add(margin, rep.threshold);
    }
    return rep;
}

namespace detail {

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void stratum_line(std::ostringstream& os, const char* label, const StratumStats& s) {
    os << "  " << label << ": count=" << s.count << " violations=" << s.violations;
    if (s.count > 0)
        os << " min_margin=" << fmt(s.min_margin) << " max_abs_margin=" << fmt(s.max_abs_margin);
    os << "\n";
}

}  // namespace detail

inline std::string NogoReport::to_text() const {
    std::ostringstream os;
    os << "gaussian no-go verification\n";
    os << "samples: " << options.n_samples << "\n";
    os << "seed: " << options.seed << "\n";
    os << "threshold: " << detail::fmt(threshold) << "\n";
    os << "violations: " << violations << "\n";
    os << "min_margin: " << detail::fmt(min_margin) << "\n";
    os << "strata by |det M|:\n";
    detail::stratum_line(os, "|det M| = 1", det_eq_one);
    detail::stratum_line(os, "|det M| > 1", det_gt_one);
    detail::stratum_line(os, "|det M| < 1", det_lt_one);
    os << "targeted strata:\n";
    detail::stratum_line(os, "symplectic (N = 0, det M = 1)", symplectic);
    detail::stratum_line(os, "quantum-limited boundary", boundary);
    os << "verdict: " << (violations == 0 ? "no counterexample found" : "VIOLATIONS FOUND")
       << "\n";
    return os.str();
}

}  // namespace qecov::gaussian
