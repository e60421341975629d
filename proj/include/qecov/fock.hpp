#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qecov/common.hpp"

namespace qecov::fock {

/// State vector over a truncated multi-mode Fock basis. Basis ordering is
/// row-major in the occupation numbers: for dims (d0, d1) the flat index of
/// |n0 n1> is n0*d1 + n1.
struct FockVector {
    std::vector<int> mode_dims;
    Vec amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }

    FockVector& normalize() {
        const double n = amplitudes.norm();
        if (n == 0.0) throw std::invalid_argument("FockVector: cannot normalize zero vector");
        amplitudes /= n;
        return *this;
    }
};

/// Density operator over the same truncated basis.
struct DensityOp {
    std::vector<int> mode_dims;
    Mat matrix;

    Eigen::Index dim() const { return matrix.rows(); }
    Complex trace() const { return matrix.trace(); }

    static DensityOp from_pure(const FockVector& psi) {
        return {psi.mode_dims, psi.amplitudes * psi.amplitudes.adjoint()};
    }
};

/// Kraus decomposition of a channel. Operators share one shape; gamma is the
/// loss parameter when the set came from damping_kraus.
struct KrausSet {
    std::vector<Mat> operators;
    std::optional<double> gamma;
};

inline Eigen::Index total_dim(const std::vector<int>& mode_dims) {
    Eigen::Index d = 1;
    for (int m : mode_dims) d *= m;
    return d;
}

/// Basis ket |n0 n1 ...> for the given per-mode truncations.
inline FockVector basis_ket(const std::vector<int>& mode_dims, const std::vector<int>& occ) {
    if (occ.size() != mode_dims.size())
        throw std::invalid_argument("basis_ket: occupation/mode count mismatch");
    Eigen::Index idx = 0;
    for (std::size_t m = 0; m < occ.size(); ++m) {
        if (occ[m] < 0 || occ[m] >= mode_dims[m])
            throw std::invalid_argument("basis_ket: occupation exceeds truncation");
        idx = idx * mode_dims[m] + occ[m];
    }
    FockVector v{mode_dims, Vec::Zero(total_dim(mode_dims))};
    v.amplitudes(idx) = 1.0;
    return v;
}

struct Validity {
    bool ok = true;
    std::string reason;
};

/// Hermitian within tol, unit trace within tol, eigenvalues >= -tol.
inline Validity check_density(const Mat& rho, double tol = kStructuralTol) {
    if (rho.rows() != rho.cols()) return {false, "not square"};
    if (hermiticity_defect(rho) > tol) return {false, "not Hermitian"};
    if (std::abs(rho.trace() - Complex(1.0)) > tol) return {false, "trace != 1"};
    if (min_eigenvalue(rho) < -tol) return {false, "negative eigenvalue"};
    return {};
}

/// Amplitude-damping Kraus operators on a dim-dimensional Fock space.
/// A_k has entries sqrt(C(n,k)) sqrt((1-gamma)^(n-k) gamma^k) at (n-k, n);
/// the set is complete on the truncated space: sum_k A_k^dag A_k = I exactly,
/// because sum_{k<=n} C(n,k)(1-g)^(n-k) g^k = 1 for every n < dim.
inline KrausSet damping_kraus(double gamma, int dim) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("damping_kraus: gamma must lie in [0,1]");
    if (dim < 1) throw std::invalid_argument("damping_kraus: dim must be >= 1");
    KrausSet set;
    set.gamma = gamma;
    set.operators.reserve(dim);
    for (int k = 0; k < dim; ++k) {
        Mat a = Mat::Zero(dim, dim);
        for (int n = k; n < dim; ++n) {
            double binom = 1.0;
            for (int j = 0; j < k; ++j) binom *= double(n - j) / double(j + 1);
            a(n - k, n) = std::sqrt(binom) *
                          std::sqrt(std::pow(1.0 - gamma, n - k) * std::pow(gamma, k));
        }
        set.operators.push_back(std::move(a));
    }
    return set;
}

namespace detail {

// sum over all per-mode operator combinations of (kron K) X (kron K)^dag.
// Linear in X; X need not be Hermitian (used on dyads as well as states).
inline Mat apply_kraus_product(const Mat& x, const std::vector<KrausSet>& per_mode) {
    std::vector<std::size_t> idx(per_mode.size(), 0);
    Mat out = Mat::Zero(x.rows(), x.cols());
    while (true) {
        Mat k = per_mode[0].operators[idx[0]];
        for (std::size_t m = 1; m < per_mode.size(); ++m)
            k = kron(k, per_mode[m].operators[idx[m]]);
        out += k * x * k.adjoint();
        std::size_t m = per_mode.size();
        while (m > 0) {
            --m;
            if (++idx[m] < per_mode[m].operators.size()) break;
            idx[m] = 0;
            if (m == 0) return out;
        }
    }
}

}  // namespace detail

/// Channel action sum_k (A_k1 x A_k2 x ...) rho (...)^dag with one KrausSet
/// acting independently on each mode.
inline DensityOp apply_channel(const DensityOp& rho, const std::vector<KrausSet>& per_mode) {
    if (per_mode.size() != rho.mode_dims.size())
        throw std::invalid_argument("apply_channel: need one KrausSet per mode");
    Eigen::Index d = 1;
    for (std::size_t m = 0; m < per_mode.size(); ++m) {
        if (per_mode[m].operators.empty())
            throw std::invalid_argument("apply_channel: empty KrausSet");
        if (per_mode[m].operators[0].cols() != rho.mode_dims[m])
            throw std::invalid_argument("apply_channel: Kraus dims do not match mode dims");
        d *= per_mode[m].operators[0].rows();
    }
    if (rho.matrix.rows() != total_dim(rho.mode_dims))
        throw std::invalid_argument("apply_channel: matrix size does not match mode dims");
    (void)d;
    return {rho.mode_dims, detail::apply_kraus_product(rho.matrix, per_mode)};
}

inline FockVector tensor(const FockVector& a, const FockVector& b) {
    FockVector out;
    out.mode_dims = a.mode_dims;
    out.mode_dims.insert(out.mode_dims.end(), b.mode_dims.begin(), b.mode_dims.end());
    out.amplitudes = kron(a.amplitudes, b.amplitudes);
    return out;
}

inline DensityOp tensor(const DensityOp& a, const DensityOp& b) {
    DensityOp out;
    out.mode_dims = a.mode_dims;
    out.mode_dims.insert(out.mode_dims.end(), b.mode_dims.begin(), b.mode_dims.end());
    out.matrix = kron(a.matrix, b.matrix);
    return out;
}

/// Partial trace keeping the listed modes (0-based, any order; output mode
/// order follows the sorted keep list).
inline DensityOp partial_trace(const DensityOp& rho, const std::set<int>& keep) {
    const int n_modes = int(rho.mode_dims.size());
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    for (int m : keep)
        if (m < 0 || m >= n_modes) throw std::invalid_argument("partial_trace: bad mode index");

    std::vector<int> keep_modes(keep.begin(), keep.end());
    std::vector<int> traced_modes;
    for (int m = 0; m < n_modes; ++m)
        if (!keep.count(m)) traced_modes.push_back(m);

    std::vector<int> out_dims;
    for (int m : keep_modes) out_dims.push_back(rho.mode_dims[m]);
    Eigen::Index dout = total_dim(out_dims);
    Eigen::Index dtr = 1;
    for (int m : traced_modes) dtr *= rho.mode_dims[m];

    // flat index from per-mode occupations in the input ordering
    auto flat = [&](const std::vector<int>& occ) {
        Eigen::Index idx = 0;
        for (int m = 0; m < n_modes; ++m) idx = idx * rho.mode_dims[m] + occ[m];
        return idx;
    };
    auto unpack = [](Eigen::Index idx, const std::vector<int>& dims, std::vector<int>& occ) {
        for (int m = int(dims.size()) - 1; m >= 0; --m) {
            occ[m] = int(idx % dims[m]);
            idx /= dims[m];
        }
    };

    Mat out = Mat::Zero(dout, dout);
    std::vector<int> row_keep(keep_modes.size()), col_keep(keep_modes.size());
    std::vector<int> tr_occ(traced_modes.size());
    std::vector<int> occ_r(n_modes), occ_c(n_modes);
    std::vector<int> keep_dims = out_dims, tr_dims;
    for (int m : traced_modes) tr_dims.push_back(rho.mode_dims[m]);

    for (Eigen::Index r = 0; r < dout; ++r) {
        unpack(r, keep_dims, row_keep);
        for (Eigen::Index c = 0; c < dout; ++c) {
            unpack(c, keep_dims, col_keep);
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < dtr; ++t) {
                if (!tr_dims.empty()) unpack(t, tr_dims, tr_occ);
                for (std::size_t i = 0; i < keep_modes.size(); ++i) {
                    occ_r[keep_modes[i]] = row_keep[i];
                    occ_c[keep_modes[i]] = col_keep[i];
                }
                for (std::size_t i = 0; i < traced_modes.size(); ++i) {
                    occ_r[traced_modes[i]] = tr_occ[i];
                    occ_c[traced_modes[i]] = tr_occ[i];
                }
                sum += rho.matrix(flat(occ_r), flat(occ_c));
            }
            out(r, c) = sum;
        }
    }
    return {out_dims, out};
}

struct TruncationError : std::runtime_error {
    int required_dim;
    TruncationError(const std::string& what, int required)
        : std::runtime_error(what), required_dim(required) {}
};

/// Truncation dimension that keeps the coherent-state tail below 1e-10.
inline int coherent_dim_for(double abs_alpha) {
    return int(std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha + 10.0));
}

/// Normalized truncated Fock expansion of the coherent state |alpha>.
/// Requires the truncated tail mass to be below 1e-10; the thrown error
/// carries the dimension that would satisfy the bound.
inline FockVector coherent_vector(Complex alpha, int dim) {
    if (dim < 1) throw std::invalid_argument("coherent_vector: dim must be >= 1");
    Vec amps(dim);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built recursively
    Complex c = std::exp(-0.5 * std::norm(alpha));
    double mass = 0.0;
    for (int n = 0; n < dim; ++n) {
        amps(n) = c;
        mass += std::norm(c);
        c *= alpha / std::sqrt(double(n + 1));
    }
    const double tail = std::max(0.0, 1.0 - mass);
    if (tail >= 1e-10)
        throw TruncationError("coherent_vector: truncation tail above 1e-10",
                              coherent_dim_for(std::abs(alpha)));
    FockVector v{{dim}, std::move(amps)};
    v.normalize();
    return v;
}

}  // namespace qecov::fock
