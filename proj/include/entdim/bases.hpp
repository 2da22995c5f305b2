// bases.hpp
// Hilbert-Schmidt orthonormal operator bases: generalized Gell-Mann matrices
// with Tr(g_k g_l) = delta_kl, and spin-j operators.

#pragma once

#include "core.hpp"

namespace entdim {

/// Ordered set of Hermitian operators with Tr(g_k g_l) = delta_kl.
struct BasisSet {
    int dim = 0;
    std::vector<Matrix> elements;
    bool includes_identity = false;

    int size() const { return static_cast<int>(elements.size()); }

    /// Max deviation of the Gram matrix from the identity.
    double gram_error() const {
        double worst = 0;
        for (int i = 0; i < size(); ++i)
            for (int j = i; j < size(); ++j) {
                Complex g = hs_inner(elements[i], elements[j]);
                double target = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(g - Complex(target)));
            }
        return worst;
    }

    /// New basis with elements g'_k = sum_i O(i,k) g_i for an orthogonal O.
    BasisSet recombined(const RealMatrix& o) const {
        if (o.rows() != size() || o.cols() != size())
            throw std::invalid_argument("BasisSet::recombined: size mismatch");
        BasisSet out;
        out.dim = dim;
        out.includes_identity = false;   // recombination generally mixes elements
        out.elements.reserve(size());
        for (int k = 0; k < size(); ++k) {
            Matrix g = Matrix::Zero(dim, dim);
            for (int i = 0; i < size(); ++i) g += o(i, k) * elements[i];
            out.elements.push_back(std::move(g));
        }
        return out;
    }
};

/// Generalized Gell-Mann basis of su(d), rescaled so Tr(g_k g_l) = delta_kl.
/// Ordering: symmetric off-diagonal pairs, then antisymmetric, then diagonal,
/// each lexicographic in (k, l). With include_identity the first element is
/// Id/sqrt(d), giving d^2 elements in total.
inline BasisSet gellmann_basis(int d, bool include_identity = false) {
    if (d < 2) throw std::invalid_argument("gellmann_basis: dimension must be >= 2");
    BasisSet basis;
    basis.dim = d;
    basis.includes_identity = include_identity;
    basis.elements.reserve(static_cast<size_t>(d) * d - (include_identity ? 0 : 1));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (include_identity)
        basis.elements.push_back(identity(d) / std::sqrt(static_cast<double>(d)));
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            Matrix m = Matrix::Zero(d, d);
            m(k, l) = inv_sqrt2;
            m(l, k) = inv_sqrt2;
            basis.elements.push_back(std::move(m));
        }
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            Matrix m = Matrix::Zero(d, d);
            m(k, l) = Complex(0, -inv_sqrt2);
            m(l, k) = Complex(0, inv_sqrt2);
            basis.elements.push_back(std::move(m));
        }
    for (int l = 1; l < d; ++l) {
        Matrix m = Matrix::Zero(d, d);
        double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) m(j, j) = norm;
        m(l, l) = -static_cast<double>(l) * norm;
        basis.elements.push_back(std::move(m));
    }
    return basis;
}

struct SpinOperators {
    Matrix jx, jy, jz;
    double j = 0;
    int dim() const { return static_cast<int>(jx.rows()); }
};

/// Spin operators in the spin-j representation, dimension d = 2j+1.
/// jz is diagonal with entries m = -j ... j ascending; [jx, jy] = i jz.
inline SpinOperators spin_operators(double j) {
    double twoj = 2.0 * j;
    if (j < 0 || std::abs(twoj - std::round(twoj)) > 1e-9)
        throw std::invalid_argument("spin_operators: 2j must be a nonnegative integer");
    int d = static_cast<int>(std::lround(twoj)) + 1;
    Matrix jp = Matrix::Zero(d, d);   // raising operator
    for (int k = 0; k + 1 < d; ++k) {
        double m = -j + k;
        jp(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    SpinOperators ops;
    ops.j = j;
    ops.jx = (jp + jp.adjoint()) / 2.0;
    ops.jy = (jp - jp.adjoint()) / Complex(0, 2);
    ops.jz = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) ops.jz(k, k) = -j + k;
    return ops;
}

}  // namespace entdim
