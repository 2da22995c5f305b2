// states.hpp
// Quantum state value types and subsystem algebra: pure/mixed states with
// attached subsystem dimensions, bipartitions, partial trace and Schmidt
// decomposition. Subsystem indices are zero-based throughout the API.

#pragma once

#include <algorithm>
#include <cstdint>
#include <set>

#include "core.hpp"

namespace entdim {

/// Normalized pure state on a tensor product of qudits.
struct PureState {
    Vector amplitudes;
    std::vector<int> dims;

    PureState(Vector amps, std::vector<int> subsystem_dims)
        : amplitudes(std::move(amps)), dims(std::move(subsystem_dims)) {
        if (total_dim(dims) != amplitudes.size())
            throw std::invalid_argument("PureState: dims do not match amplitude count");
        if (!amplitudes.allFinite())
            throw std::invalid_argument("PureState: non-finite amplitudes");
        if (std::abs(amplitudes.norm() - 1.0) > tol::unit_norm)
            throw std::invalid_argument("PureState: state is not normalized");
    }

    long dim() const { return amplitudes.size(); }
    int num_parties() const { return static_cast<int>(dims.size()); }

    Matrix density() const { return amplitudes * amplitudes.adjoint(); }
};

/// Density matrix: Hermitian, unit trace, positive semidefinite (within tolerance).
struct DensityMatrix {
    Matrix matrix;
    std::vector<int> dims;

    DensityMatrix(Matrix m, std::vector<int> subsystem_dims)
        : matrix(std::move(m)), dims(std::move(subsystem_dims)) {
        if (matrix.rows() != matrix.cols())
            throw std::invalid_argument("DensityMatrix: matrix must be square");
        if (total_dim(dims) != matrix.rows())
            throw std::invalid_argument("DensityMatrix: dims do not match matrix size");
        if (!is_finite(matrix))
            throw std::invalid_argument("DensityMatrix: non-finite entries");
        if (!is_hermitian(matrix))
            throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
        if (std::abs(matrix.trace().real() - 1.0) > tol::trace_one ||
            std::abs(matrix.trace().imag()) > tol::trace_one)
            throw std::invalid_argument("DensityMatrix: trace is not 1");
        auto ev = eigh(matrix);
        if (ev.values.minCoeff() < -tol::psd)
            throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
    }

    long dim() const { return matrix.rows(); }
    int num_parties() const { return static_cast<int>(dims.size()); }

    static DensityMatrix from_pure(const PureState& psi) {
        return DensityMatrix(psi.density(), psi.dims);
    }
};

/// Canonical bipartition of n parties. party_a always contains particle 0;
/// the index encodes party_b membership bitwise, giving the unique label
/// range {1, ..., 2^(n-1) - 1}.
struct Bipartition {
    int n = 0;
    std::vector<int> party_a;
    std::vector<int> party_b;
    std::uint64_t index = 0;

    Bipartition(int num_parties, const std::set<int>& party)
        : n(num_parties) {
        if (n < 2) throw std::invalid_argument("Bipartition: need at least two parties");
        for (int p : party)
            if (p < 0 || p >= n)
                throw std::invalid_argument("Bipartition: particle index out of range");
        if (party.empty() || static_cast<int>(party.size()) == n)
            throw std::invalid_argument("Bipartition: party must be nonempty and proper");
        std::vector<int> a, b;
        for (int i = 0; i < n; ++i)
            (party.count(i) ? a : b).push_back(i);
        if (!party.count(0)) std::swap(a, b);   // canonicalize: 0 lives in party_a
        party_a = std::move(a);
        party_b = std::move(b);
        index = 0;
        for (int p : party_b) index |= (std::uint64_t{1} << (p - 1));
    }

    /// Size of the smaller party; the class the cut belongs to in reports.
    int size_class() const {
        return std::min<int>(static_cast<int>(party_a.size()),
                             static_cast<int>(party_b.size()));
    }

    /// Human-readable label like "1|23" (one-based particle numbers).
    std::string label() const {
        auto part = [](const std::vector<int>& v) {
            std::string s;
            for (int p : v) s += std::to_string(p + 1);
            return s;
        };
        return part(party_a) + "|" + part(party_b);
    }
};

inline long party_dim(const std::vector<int>& dims, const std::vector<int>& party) {
    long p = 1;
    for (int i : party) p *= dims[i];
    return p;
}

/// Reduced state on the kept subsystems; trace preserved.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<int>& keep) {
    const int n = rho.num_parties();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    for (int k : keep)
        if (k < 0 || k >= n)
            throw std::invalid_argument("partial_trace: subsystem index out of range");

    std::vector<int> kept(keep.begin(), keep.end());
    std::vector<int> traced;
    for (int i = 0; i < n; ++i)
        if (!keep.count(i)) traced.push_back(i);

    std::vector<int> kept_dims, traced_dims;
    for (int i : kept) kept_dims.push_back(rho.dims[i]);
    for (int i : traced) traced_dims.push_back(rho.dims[i]);
    if (traced.empty()) return rho;

    MultiIndex full(rho.dims), kidx(kept_dims), tidx(traced_dims);
    Matrix out = Matrix::Zero(kidx.total(), kidx.total());

    // flat index of the full space from (kept digits, traced digits)
    auto compose = [&](long kflat, long tflat) {
        long f = 0;
        for (size_t a = 0; a < kept.size(); ++a)
            f += static_cast<long>(kidx.digit(kflat, static_cast<int>(a))) * full.stride(kept[a]);
        for (size_t a = 0; a < traced.size(); ++a)
            f += static_cast<long>(tidx.digit(tflat, static_cast<int>(a))) * full.stride(traced[a]);
        return f;
    };

    for (long r = 0; r < kidx.total(); ++r)
        for (long c = 0; c < kidx.total(); ++c) {
            Complex acc = 0;
            for (long t = 0; t < tidx.total(); ++t)
                acc += rho.matrix(compose(r, t), compose(c, t));
            out(r, c) = acc;
        }

    // symmetrize away roundoff so the invariant check stays happy
    out = (out + Matrix(out.adjoint())) / 2.0;
    return DensityMatrix(std::move(out), kept_dims);
}

/// Reshape a pure state into the (party_a x party_b) coefficient matrix of a cut.
inline Matrix cut_matrix(const PureState& psi, const Bipartition& cut) {
    MultiIndex full(psi.dims);
    std::vector<int> adims, bdims;
    for (int i : cut.party_a) adims.push_back(psi.dims[i]);
    for (int i : cut.party_b) bdims.push_back(psi.dims[i]);
    MultiIndex ai(adims), bi(bdims);
    Matrix m(ai.total(), bi.total());
    for (long f = 0; f < full.total(); ++f) {
        long ra = 0, rb = 0;
        for (size_t k = 0; k < cut.party_a.size(); ++k)
            ra += static_cast<long>(full.digit(f, cut.party_a[k])) * ai.stride(static_cast<int>(k));
        for (size_t k = 0; k < cut.party_b.size(); ++k)
            rb += static_cast<long>(full.digit(f, cut.party_b[k])) * bi.stride(static_cast<int>(k));
        m(ra, rb) = psi.amplitudes[f];
    }
    return m;
}

struct SchmidtDecomposition {
    RealVector coefficients;   // lambda_k, descending, sum = 1
    Matrix left_basis;         // columns |u_k>
    Matrix right_basis;        // columns |v_k>

    int rank(double cutoff = tol::schmidt_rank_cutoff) const {
        int r = 0;
        for (Eigen::Index i = 0; i < coefficients.size(); ++i)
            if (coefficients[i] > cutoff) ++r;
        return r;
    }
};

/// Schmidt decomposition across a cut: psi = sum_k sqrt(lambda_k) |u_k>|v_k>.
inline SchmidtDecomposition schmidt_decompose(const PureState& psi, const Bipartition& cut) {
    Matrix m = cut_matrix(psi, cut);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RealVector lam = svd.singularValues().array().square();
    return {lam, svd.matrixU(), svd.matrixV().conjugate()};
}

/// Convenience overload for bipartite states (cut between subsystem 0 and the rest).
inline SchmidtDecomposition schmidt_decompose(const PureState& psi) {
    if (psi.num_parties() != 2)
        throw std::invalid_argument("schmidt_decompose: default cut needs a bipartite state");
    return schmidt_decompose(psi, Bipartition(2, {0}));
}

/// Schmidt rank of a pure state across a cut.
inline int schmidt_rank(const PureState& psi, const Bipartition& cut,
                        double cutoff = tol::schmidt_rank_cutoff) {
    return schmidt_decompose(psi, cut).rank(cutoff);
}

inline PureState tensor(const PureState& a, const PureState& b) {
    Vector v(a.dim() * b.dim());
    for (long i = 0; i < a.dim(); ++i)
        for (long j = 0; j < b.dim(); ++j)
            v[i * b.dim() + j] = a.amplitudes[i] * b.amplitudes[j];
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return PureState(std::move(v), std::move(dims));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return DensityMatrix(kron(a.matrix, b.matrix), std::move(dims));
}

}  // namespace entdim
