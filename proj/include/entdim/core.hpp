// core.hpp
// Shared linear-algebra aliases and small helpers used across the library.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace entdim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;   // dense complex matrix
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// Numerical tolerances used by type invariants and algorithms.
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double unit_norm = 1e-10;
inline constexpr double basis_orthonormal = 1e-10;
inline constexpr double schmidt_rank_cutoff = 1e-10;   // on coefficients lambda_k
inline constexpr double qfi_support_scale = 1e-12;     // eps = scale * tr(rho)
inline constexpr double violation_margin = 1e-9;       // strict-violation guard band
}  // namespace tol

inline bool is_finite(const Matrix& m) {
    return m.allFinite();
}

inline bool is_hermitian(const Matrix& m, double eps = tol::hermiticity) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= eps;
}

inline void require_hermitian(const Matrix& m, const char* what) {
    if (!is_hermitian(m))
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

/// Kronecker product a (x) b with row index (x,y) -> x*b.rows()+y.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix identity(Eigen::Index d) {
    return Matrix::Identity(d, d);
}

inline long total_dim(const std::vector<int>& dims) {
    long p = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
        p *= d;
    }
    return p;
}

/// Eigenvalues/vectors of a Hermitian matrix, ascending eigenvalues.
struct EighResult {
    RealVector values;
    Matrix vectors;
};

inline EighResult eigh(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Hermitian eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Sum of singular values.
inline double trace_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    if (!is_finite(m)) throw std::invalid_argument("trace_norm: non-finite entries");
    // Singular values via the Gram matrix of the thin side.
    if (m.rows() <= m.cols()) {
        Matrix g = m * m.adjoint();
        auto ev = eigh(g);
        double s = 0;
        for (Eigen::Index i = 0; i < ev.values.size(); ++i)
            s += std::sqrt(std::max(0.0, ev.values[i]));
        return s;
    }
    return trace_norm(Matrix(m.adjoint()));
}

inline double trace_norm(const RealMatrix& m) {
    return trace_norm(Matrix(m.cast<Complex>()));
}

/// Hilbert-Schmidt inner product Tr(a^dag b).
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
    return (a.adjoint() * b).trace();
}

/// Mixed-radix index helpers for multi-subsystem states.
class MultiIndex {
public:
    explicit MultiIndex(std::vector<int> dims) : dims_(std::move(dims)) {
        strides_.resize(dims_.size());
        long s = 1;
        for (int i = static_cast<int>(dims_.size()) - 1; i >= 0; --i) {
            strides_[i] = s;
            s *= dims_[i];
        }
        total_ = s;
    }

    long total() const { return total_; }
    int dim(int k) const { return dims_[k]; }
    int digit(long flat, int k) const {
        return static_cast<int>((flat / strides_[k]) % dims_[k]);
    }
    long stride(int k) const { return strides_[k]; }

private:
    std::vector<int> dims_;
    std::vector<long> strides_;
    long total_ = 1;
};

}  // namespace entdim
