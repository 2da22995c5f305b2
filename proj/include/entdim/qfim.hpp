// qfim.hpp
// Quantum Fisher information of unitary generators, computed from the
// spectral decomposition of the state:
//
//   F_jk = sum_{l,m : lambda_l + lambda_m > eps}
//          2 (lambda_l - lambda_m)^2 / (lambda_l + lambda_m)
//          Re( <l|H_j|m> <m|H_k|l> )
//
// with support cutoff eps = 1e-12 * tr(rho). For pure states this equals
// four times the covariance matrix.

#pragma once

#include "bases.hpp"
#include "states.hpp"

namespace entdim {

namespace detail {

struct Spectral {
    RealVector lambda;   // clamped to >= 0
    Matrix vectors;
    double eps;
};

inline Spectral spectral(const DensityMatrix& rho) {
    auto ev = eigh(rho.matrix);
    RealVector lam = ev.values.cwiseMax(0.0);
    return {lam, ev.vectors, tol::qfi_support_scale * lam.sum()};
}

inline void check_observables(const DensityMatrix& rho, const std::vector<Matrix>& ops) {
    for (const auto& h : ops) {
        if (h.rows() != rho.dim() || h.cols() != rho.dim())
            throw std::invalid_argument("qfim: observable dimension mismatch");
        if (!is_hermitian(h))
            throw std::invalid_argument("qfim: observable is not Hermitian");
    }
}

}  // namespace detail

/// QFIM for a list of Hermitian generators. Symmetric PSD matrix.
inline RealMatrix qfim(const DensityMatrix& rho, const std::vector<Matrix>& ops) {
    detail::check_observables(rho, ops);
    auto spec = detail::spectral(rho);
    const long d = rho.dim();
    const int n = static_cast<int>(ops.size());

    // sqrt-weighted transformed generators: S_j = sqrt(W) .* (U^dag H_j U)
    RealMatrix w(d, d);
    for (long l = 0; l < d; ++l)
        for (long m = 0; m < d; ++m) {
            double s = spec.lambda[l] + spec.lambda[m];
            double diff = spec.lambda[l] - spec.lambda[m];
            w(l, m) = (s > spec.eps) ? std::sqrt(2.0 * diff * diff / s) : 0.0;
        }

    Matrix stacked(d * d, n);
    for (int jop = 0; jop < n; ++jop) {
        Matrix t = spec.vectors.adjoint() * ops[jop] * spec.vectors;
        t.array() *= w.array().cast<Complex>();
        stacked.col(jop) = Eigen::Map<const Vector>(t.data(), d * d);
    }
    RealMatrix f = (stacked.adjoint() * stacked).real();
    return (f + f.transpose()) / 2.0;
}

/// QFI of a single generator.
inline double qfi(const DensityMatrix& rho, const Matrix& h) {
    return qfim(rho, {h})(0, 0);
}

/// Symmetrized covariance matrix [Gamma]_jk = <{H_j,H_k}>/2 - <H_j><H_k>.
inline RealMatrix covariance_matrix(const DensityMatrix& rho, const std::vector<Matrix>& ops) {
    detail::check_observables(rho, ops);
    auto spec = detail::spectral(rho);
    const long d = rho.dim();
    const int n = static_cast<int>(ops.size());

    // rho = L L^dag with L = U sqrt(Lambda); Re Tr(rho H_j H_k) = Re <H_j L, H_k L>
    Matrix l = spec.vectors * spec.lambda.cwiseSqrt().asDiagonal();
    Matrix stacked(d * d, n);
    RealVector means(n);
    for (int jop = 0; jop < n; ++jop) {
        Matrix c = ops[jop] * l;
        means[jop] = (l.adjoint() * c).trace().real();
        stacked.col(jop) = Eigen::Map<const Vector>(c.data(), d * d);
    }
    RealMatrix gamma = (stacked.adjoint() * stacked).real() - means * means.transpose();
    return (gamma + gamma.transpose()) / 2.0;
}

/// The 2x2-block QFIM over a basis pair: blocks of the full QFIM of rho
/// with respect to the concatenated list {g_a (x) 1} + {1 (x) g_b}.
struct QfimBlocks {
    RealMatrix f_a;
    RealMatrix f_b;
    RealMatrix x;
    BasisSet basis_a;
    BasisSet basis_b;

    RealMatrix assembled() const {
        const int na = static_cast<int>(f_a.rows());
        const int nb = static_cast<int>(f_b.rows());
        RealMatrix full(na + nb, na + nb);
        full.topLeftCorner(na, na) = f_a;
        full.topRightCorner(na, nb) = x;
        full.bottomLeftCorner(nb, na) = x.transpose();
        full.bottomRightCorner(nb, nb) = f_b;
        return full;
    }
};

inline std::vector<Matrix> collective_ops(const BasisSet& basis_a, const BasisSet& basis_b) {
    if (basis_a.size() != basis_b.size())
        throw std::invalid_argument("collective_ops: basis size mismatch");
    std::vector<Matrix> ops;
    ops.reserve(basis_a.size());
    Matrix ia = identity(basis_a.dim), ib = identity(basis_b.dim);
    for (int i = 0; i < basis_a.size(); ++i)
        ops.push_back(kron(basis_a.elements[i], ib) + kron(ia, basis_b.elements[i]));
    return ops;
}

inline QfimBlocks qfim_blocks(const DensityMatrix& rho, const BasisSet& basis_a,
                              const BasisSet& basis_b) {
    if (rho.num_parties() != 2)
        throw std::invalid_argument("qfim_blocks: state must be bipartite");
    if (basis_a.dim != rho.dims[0] || basis_b.dim != rho.dims[1])
        throw std::invalid_argument("qfim_blocks: basis does not match subsystem dimension");

    std::vector<Matrix> ops;
    ops.reserve(basis_a.size() + basis_b.size());
    Matrix ia = identity(basis_a.dim), ib = identity(basis_b.dim);
    for (const auto& g : basis_a.elements) ops.push_back(kron(g, ib));
    for (const auto& g : basis_b.elements) ops.push_back(kron(ia, g));

    RealMatrix f = qfim(rho, ops);
    const int na = basis_a.size(), nb = basis_b.size();
    QfimBlocks blocks;
    blocks.f_a = f.topLeftCorner(na, na);
    blocks.f_b = f.bottomRightCorner(nb, nb);
    blocks.x = f.topRightCorner(na, nb);
    blocks.basis_a = basis_a;
    blocks.basis_b = basis_b;
    return blocks;
}

}  // namespace entdim
