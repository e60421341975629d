#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qecov/fock.hpp"

namespace qecov::codes {

enum class CodeId { direct, dual_rail, three_qubit, bosonic, four_qubit_approx };

inline const char* to_string(CodeId id) {
    switch (id) {
        case CodeId::direct: return "direct";
        case CodeId::dual_rail: return "dual_rail";
        case CodeId::three_qubit: return "three_qubit";
        case CodeId::bosonic: return "bosonic";
        case CodeId::four_qubit_approx: return "four_qubit_approx";
    }
    return "?";
}

inline std::optional<CodeId> code_from_string(const std::string& s) {
    for (CodeId id : {CodeId::direct, CodeId::dual_rail, CodeId::three_qubit,
                      CodeId::bosonic, CodeId::four_qubit_approx})
        if (s == to_string(id)) return id;
    return std::nullopt;
}

/// Input qubit on the Bloch sphere: cos(w/2)|0>_L + e^{i theta} sin(w/2)|1>_L.
struct BlochInput {
    double w;      // polar angle in [0, pi]
    double theta;  // azimuth in [0, 2 pi)
};

enum class Branch { q, q_tilde };

struct CodeSpec {
    CodeId id;
    std::vector<int> mode_dims;
    fock::FockVector logical_zero;
    fock::FockVector logical_one;
    bool has_simulated_recovery;

    static CodeSpec make(CodeId id);
};

inline CodeSpec CodeSpec::make(CodeId id) {
    using fock::basis_ket;
    CodeSpec c;
    c.id = id;
    switch (id) {
        case CodeId::direct: {
            c.mode_dims = {2};
            c.logical_zero = basis_ket(c.mode_dims, {0});
            c.logical_one = basis_ket(c.mode_dims, {1});
            c.has_simulated_recovery = true;
            break;
        }
        case CodeId::dual_rail: {
            c.mode_dims = {2, 2};
            c.logical_zero = basis_ket(c.mode_dims, {0, 1});
            c.logical_one = basis_ket(c.mode_dims, {1, 0});
            c.has_simulated_recovery = true;
            break;
        }
        case CodeId::three_qubit: {
            c.mode_dims = {2, 2, 2};
            c.logical_zero = basis_ket(c.mode_dims, {0, 0, 0});
            c.logical_one = basis_ket(c.mode_dims, {1, 1, 1});
            c.has_simulated_recovery = true;
            break;
        }
        case CodeId::bosonic: {
            c.mode_dims = {5, 5};
            fock::FockVector z = basis_ket(c.mode_dims, {4, 0});
            z.amplitudes += basis_ket(c.mode_dims, {0, 4}).amplitudes;
            z.normalize();
            c.logical_zero = z;
            c.logical_one = basis_ket(c.mode_dims, {2, 2});
            c.has_simulated_recovery = true;
            break;
        }
        case CodeId::four_qubit_approx: {
            c.mode_dims = {2, 2, 2, 2};
            fock::FockVector z = basis_ket(c.mode_dims, {0, 0, 0, 0});
            z.amplitudes += basis_ket(c.mode_dims, {1, 1, 1, 1}).amplitudes;
            z.normalize();
            fock::FockVector o = basis_ket(c.mode_dims, {0, 0, 1, 1});
            o.amplitudes += basis_ket(c.mode_dims, {1, 1, 0, 0}).amplitudes;
            o.normalize();
            c.logical_zero = z;
            c.logical_one = o;
            c.has_simulated_recovery = false;
            break;
        }
    }
    return c;
}

/// cos(w/2)|0>_L + e^{i theta} sin(w/2)|1>_L
inline fock::FockVector encode(const CodeSpec& code, BlochInput q) {
    const Complex phase = std::polar(1.0, q.theta);
    fock::FockVector out = code.logical_zero;
    out.amplitudes = std::cos(q.w / 2) * code.logical_zero.amplitudes +
                     phase * std::sin(q.w / 2) * code.logical_one.amplitudes;
    return out;
}

/// The orthogonal partner sin(w/2)|0>_L - e^{i theta} cos(w/2)|1>_L.
inline fock::FockVector encode_antipode(const CodeSpec& code, BlochInput q) {
    const Complex phase = std::polar(1.0, q.theta);
    fock::FockVector out = code.logical_zero;
    out.amplitudes = std::sin(q.w / 2) * code.logical_zero.amplitudes -
                     phase * std::cos(q.w / 2) * code.logical_one.amplitudes;
    return out;
}

/// Decoding procedure as a channel from the code's Fock space to one qubit,
/// given by Kraus operators of shape 2 x dim. Each listed (bra0, bra1) pair
/// becomes the coherent decode |0><bra0| + |1><bra1|; the orthogonal
/// complement of all listed bras is scrambled to I/2 (measurement outcomes
/// outside every decode subspace carry no logical information).
struct DecodeChannel {
    std::vector<Mat> kraus;
};

namespace detail {

inline DecodeChannel build_decode(const std::vector<std::pair<Vec, Vec>>& pairs,
                                  Eigen::Index dim, bool scramble_complement) {
    DecodeChannel ch;
    Mat rows(2 * pairs.size(), dim);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        Mat k = Mat::Zero(2, dim);
        k.row(0) = pairs[i].first.adjoint();
        k.row(1) = pairs[i].second.adjoint();
        ch.kraus.push_back(k);
        rows.row(2 * i) = pairs[i].first.adjoint();
        rows.row(2 * i + 1) = pairs[i].second.adjoint();
    }
    if (scramble_complement) {
        Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-12) ++rank;
        for (Eigen::Index j = rank; j < dim; ++j) {
            Vec e = svd.matrixV().col(j);
            for (int b = 0; b < 2; ++b) {
                Mat k = Mat::Zero(2, dim);
                k.row(b) = e.adjoint() / std::sqrt(2.0);
                ch.kraus.push_back(k);
            }
        }
    }
    return ch;
}

}  // namespace detail

/// Recovery/decoding channel for codes with a full simulated recovery.
/// - direct: the mode is already the qubit.
/// - dual_rail: one photon -> |01>->|0>, |10>->|1>; vacuum -> I/2.
/// - three_qubit: majority-vote bit-flip correction, then decode the
///   majority value.
/// - bosonic: four photons -> identity decode; three photons (one loss) ->
///   {|30>,|12>}->(|0>,|1>) and {|03>,|21>}->(|0>,|1>); two or fewer -> I/2.
inline DecodeChannel recovery_channel(const CodeSpec& code) {
    using fock::basis_ket;
    const Eigen::Index dim = fock::total_dim(code.mode_dims);
    auto ket = [&](std::vector<int> occ) { return basis_ket(code.mode_dims, occ).amplitudes; };
    switch (code.id) {
        case CodeId::direct:
            return detail::build_decode({{ket({0}), ket({1})}}, dim, false);
        case CodeId::dual_rail:
            return detail::build_decode({{ket({0, 1}), ket({1, 0})}}, dim, true);
        case CodeId::three_qubit:
            return detail::build_decode({{ket({0, 0, 0}), ket({1, 1, 1})},
                                         {ket({1, 0, 0}), ket({0, 1, 1})},
                                         {ket({0, 1, 0}), ket({1, 0, 1})},
                                         {ket({0, 0, 1}), ket({1, 1, 0})}},
                                        dim, false);
        case CodeId::bosonic: {
            Vec zero_l = code.logical_zero.amplitudes;
            return detail::build_decode({{zero_l, ket({2, 2})},
                                         {ket({3, 0}), ket({1, 2})},
                                         {ket({0, 3}), ket({2, 1})}},
                                        dim, true);
        }
        case CodeId::four_qubit_approx:
            throw std::invalid_argument(
                "recovery_channel: four_qubit_approx has closed-form outputs only");
    }
    throw std::logic_error("recovery_channel: unknown code");
}

namespace detail {

inline Mat decode(const DecodeChannel& ch, const Mat& x) {
    Mat out = Mat::Zero(2, 2);
    for (const Mat& k : ch.kraus) out += k * x * k.adjoint();
    return out;
}

/// Full linear pipeline on an arbitrary operator over the code space:
/// per-mode damping followed by the recovery channel.
inline Mat2 pipeline(const CodeSpec& code, double gamma, const Mat& x) {
    std::vector<fock::KrausSet> per_mode;
    per_mode.reserve(code.mode_dims.size());
    for (int d : code.mode_dims) per_mode.push_back(fock::damping_kraus(gamma, d));
    const Mat damped = fock::detail::apply_kraus_product(x, per_mode);
    return decode(recovery_channel(code), damped);
}

}  // namespace detail

/// Encode, transmit through per-mode amplitude damping, and decode.
/// four_qubit_approx has no Fock-level recovery and is rejected here; its
/// outputs are available through closed_form_output.
inline Mat2 transmit_and_decode(const CodeSpec& code, double gamma, BlochInput q,
                                Branch branch = Branch::q) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("transmit_and_decode: gamma must lie in [0,1]");
    if (!code.has_simulated_recovery)
        throw std::invalid_argument(
            "transmit_and_decode: unsupported for four_qubit_approx (closed form only)");
    const fock::FockVector psi =
        branch == Branch::q ? encode(code, q) : encode_antipode(code, q);
    const Mat dyad = psi.amplitudes * psi.amplitudes.adjoint();
    return detail::pipeline(code, gamma, dyad);
}

/// Analytic decoded outputs. For four_qubit_approx the transcribed matrix is
/// Hermitized (rho <- (rho + rho^dag)/2) and the pre-Hermitization defect
/// ||rho - rho^dag||_max is reported through herm_defect when requested.
inline Mat2 closed_form_output(const CodeSpec& code, double gamma, BlochInput q,
                               Branch branch = Branch::q, double* herm_defect = nullptr) {
    const double w = q.w, th = q.theta, g = gamma;
    const double cw = std::cos(w), sw = std::sin(w);
    const Complex em = std::polar(1.0, -th);  // e^{-i theta}
    const Complex ep = std::polar(1.0, th);
    const double sgn = branch == Branch::q ? 1.0 : -1.0;
    if (herm_defect) *herm_defect = 0.0;
    Mat2 rho;
    switch (code.id) {
        case CodeId::direct: {
            // 1/2 [1 + g -+ (1-g) cos w,  +-e^{-i th} sqrt(1-g) sin w;
            //      h.c.,                  (1-g)(1 -+ cos w)]
            rho(0, 0) = 0.5 * (1.0 + g + sgn * (1.0 - g) * cw);
            rho(0, 1) = sgn * 0.5 * em * std::sqrt(1.0 - g) * sw;
            rho(1, 0) = std::conj(rho(0, 1));
            rho(1, 1) = 0.5 * (1.0 - g) * (1.0 - sgn * cw);
            return rho;
        }
        case CodeId::dual_rail: {
            // (1-g)|q><q| + g I/2 for the transmitted state
            rho(0, 0) = 0.5 * (1.0 + sgn * (1.0 - g) * cw);
            rho(0, 1) = sgn * 0.5 * em * (1.0 - g) * sw;
            rho(1, 0) = std::conj(rho(0, 1));
            rho(1, 1) = 0.5 * (1.0 - sgn * (1.0 - g) * cw);
            return rho;
        }
        case CodeId::three_qubit: {
            const double p = g;  // single channel parameter
            const double p32 = std::pow(1.0 - p, 1.5);
            rho(0, 0) = 0.5 * (1.0 + (3.0 - 2.0 * p) * p * p +
                               sgn * (1.0 - p) * (1.0 - p) * (1.0 + 2.0 * p) * cw);
            rho(0, 1) = sgn * 0.5 * em * p32 * sw;
            rho(1, 0) = std::conj(rho(0, 1));
            rho(1, 1) = 0.5 * (1.0 - p) * (1.0 - p) * (1.0 + 2.0 * p) * (1.0 - sgn * cw);
            return rho;
        }
        case CodeId::bosonic: {
            const double k = std::pow(1.0 - g, 3) * (1.0 + 3.0 * g);
            rho(0, 0) = 0.5 * (1.0 + sgn * k * cw);
            rho(0, 1) = sgn * 0.5 * em * k * sw;
            rho(1, 0) = std::conj(rho(0, 1));
            rho(1, 1) = 0.5 * (1.0 - sgn * k * cw);
            return rho;
        }
        case CodeId::four_qubit_approx: {
            const double g2 = g * g, g3 = g * g * g;
            const double a = g2 - g3;                  // e^{+i th} coefficient
            const double b = 2.0 - 5.0 * g2 + 3.0 * g3;  // e^{-i th} coefficient
            const double kz = (1.0 - g) * (1.0 - g) * (1.0 + 2.0 * g);
            if (branch == Branch::q) {
                rho(0, 0) = 0.5 * (1.0 + g2 * (2.0 * g - 1.0) + kz * cw);
                rho(0, 1) = 0.25 * (a * ep + b * em) * sw;
                rho(1, 0) = 0.25 * (a * em + b * ep) * sw;
                rho(1, 1) = 0.5 * (1.0 + g2 - 2.0 * g3 - kz * cw);
            } else {
                rho(0, 0) = 0.5 * (1.0 + g2 * (2.0 * g - 1.0) - kz * cw);
                rho(0, 1) = -0.25 * (b * em + a * ep) * sw;
                rho(1, 0) = -0.25 * (a * em + b * ep) * sw;
                rho(1, 1) = 0.5 * (1.0 + g2 - 2.0 * g3 + kz * cw);
            }
            if (herm_defect) *herm_defect = hermiticity_defect(rho);
            Mat2 h = 0.5 * (rho + rho.adjoint());
            return h;
        }
    }
    throw std::logic_error("closed_form_output: unknown code");
}

/// Apply a channel given its Choi matrix J = sum_ij |i><j| (x) E(|i><j|).
inline Mat2 apply_choi(const Mat4& choi, const Mat2& rho) {
    Mat2 out = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(k, l) += rho(i, j) * choi(2 * i + k, 2 * j + l);
    return out;
}

/// Choi matrix of the end-to-end logical channel (encode -> damping ->
/// recovery). Codes with a simulated recovery use the linear pipeline on the
/// logical dyads; four_qubit_approx is reconstructed from its closed forms
/// evaluated at the six Pauli eigenstates.
inline Mat4 effective_choi(const CodeSpec& code, double gamma) {
    std::array<std::array<Mat2, 2>, 2> e;  // e[i][j] = E(|i><j|)
    if (code.has_simulated_recovery) {
        const Vec l0 = code.logical_zero.amplitudes;
        const Vec l1 = code.logical_one.amplitudes;
        const std::array<Vec, 2> basis = {l0, l1};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Mat dyad = basis[i] * basis[j].adjoint();
                e[i][j] = detail::pipeline(code, gamma, dyad);
            }
    } else {
        const double pi = 3.14159265358979323846;
        auto cf = [&](double w, double th) {
            return closed_form_output(code, gamma, {w, th}, Branch::q);
        };
        const Mat2 p0 = cf(0.0, 0.0), p1 = cf(pi, 0.0);
        const Mat2 ex = cf(pi / 2, 0.0) - cf(pi / 2, pi);          // E(sigma_x)
        const Mat2 ey = cf(pi / 2, pi / 2) - cf(pi / 2, 3 * pi / 2);  // E(sigma_y)
        e[0][0] = p0;
        e[1][1] = p1;
        const Complex i1(0.0, 1.0);
        e[0][1] = 0.5 * (ex + i1 * ey);
        e[1][0] = 0.5 * (ex - i1 * ey);
    }
    Mat4 choi = Mat4::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            choi.block<2, 2>(2 * i, 2 * j) = e[i][j];
    return choi;
}

/// Knill-Laflamme overlap tensor <chi_i| A_k^dag A_l |chi_j> with the channel
/// Kraus operators grouped by total photons lost, k = sum of per-mode losses,
/// truncated at max_loss. The code is deformable when some (k,l)-diagonal
/// depends on the codeword.
struct KlMatrix {
    int max_loss;
    // overlaps[k][l] is the 2x2 block in (i,j)
    std::vector<std::vector<Mat2>> overlaps;
    bool deformable;
    double max_diagonal_spread;
};

inline KlMatrix kl_matrix(const CodeSpec& code, double gamma, int max_loss) {
    if (max_loss < 0) throw std::invalid_argument("kl_matrix: max_loss must be >= 0");
    const int n_modes = int(code.mode_dims.size());
    std::vector<fock::KrausSet> per_mode;
    for (int d : code.mode_dims) per_mode.push_back(fock::damping_kraus(gamma, d));

    // enumerate per-mode loss patterns with total <= max_loss
    std::vector<std::vector<int>> patterns;
    std::vector<int> cur(n_modes, 0);
    auto rec = [&](auto&& self, int mode, int used) -> void {
        if (mode == n_modes) {
            patterns.push_back(cur);
            return;
        }
        for (int k = 0; k < code.mode_dims[mode] && used + k <= max_loss; ++k) {
            cur[mode] = k;
            self(self, mode + 1, used + k);
        }
        cur[mode] = 0;
    };
    rec(rec, 0, 0);

    // group: images of both codewords under each pattern, keyed by total loss
    const std::array<Vec, 2> chi = {code.logical_zero.amplitudes,
                                    code.logical_one.amplitudes};
    std::vector<std::vector<std::array<Vec, 2>>> images(max_loss + 1);
    for (const auto& pat : patterns) {
        int total = 0;
        for (int k : pat) total += k;
        Mat op = per_mode[0].operators[pat[0]];
        for (int m = 1; m < n_modes; ++m) op = kron(op, per_mode[m].operators[pat[m]]);
        images[total].push_back({Vec(op * chi[0]), Vec(op * chi[1])});
    }

    KlMatrix out;
    out.max_loss = max_loss;
    out.overlaps.assign(max_loss + 1, std::vector<Mat2>(max_loss + 1, Mat2::Zero()));
    for (int k = 0; k <= max_loss; ++k)
        for (int l = 0; l <= max_loss; ++l) {
            Mat2 block = Mat2::Zero();
            for (const auto& ik : images[k])
                for (const auto& il : images[l])
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) block(i, j) += ik[i].dot(il[j]);
            out.overlaps[k][l] = block;
        }

    out.max_diagonal_spread = 0.0;
    for (int k = 0; k <= max_loss; ++k)
        for (int l = 0; l <= max_loss; ++l)
            out.max_diagonal_spread =
                std::max(out.max_diagonal_spread,
                         std::abs(out.overlaps[k][l](0, 0) - out.overlaps[k][l](1, 1)));
    out.deformable = out.max_diagonal_spread > kAlgebraicTol;
    return out;
}

}  // namespace qecov::codes
