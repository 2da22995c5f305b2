// Shared test utilities: seeded random state generators and independent
// reference implementations used as oracles against the library code.

#pragma once

#include <random>

#include <entdim/entdim.hpp>

namespace testutil {

using namespace entdim;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector random_complex_vector(long n, std::mt19937_64& gen) {
    std::normal_distribution<double> gauss;
    Vector v(n);
    for (long i = 0; i < n; ++i) v[i] = Complex(gauss(gen), gauss(gen));
    return v;
}

inline PureState random_pure(const std::vector<int>& dims, std::mt19937_64& gen) {
    Vector v = random_complex_vector(total_dim(dims), gen);
    v /= v.norm();
    return PureState(std::move(v), dims);
}

inline Matrix random_unitary(int d, std::mt19937_64& gen) {
    Matrix g(d, d);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(gen), gauss(gen));
    Eigen::HouseholderQR<Matrix> qr(g);
    return Matrix(qr.householderQ()) ;
}

inline RealMatrix random_orthogonal(int n, std::mt19937_64& gen) {
    RealMatrix g(n, n);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(gen);
    Eigen::HouseholderQR<RealMatrix> qr(g);
    RealMatrix q = qr.householderQ();
    // fix signs for a uniform-ish distribution; any orthogonal matrix works here
    RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

/// Pure bipartite state with exactly the given Schmidt rank (up to cutoff):
/// random positive Schmidt coefficients and Haar-ish local bases.
inline PureState random_schmidt_rank_state(int da, int db, int r, std::mt19937_64& gen) {
    if (r > std::min(da, db)) throw std::invalid_argument("rank too large");
    std::exponential_distribution<double> expo(1.0);
    RealVector lam(r);
    for (int k = 0; k < r; ++k) lam[k] = expo(gen) + 0.05;   // bounded away from zero
    lam /= lam.sum();
    Matrix u = random_unitary(da, gen).leftCols(r);
    Matrix v = random_unitary(db, gen).leftCols(r);
    Vector psi = Vector::Zero(static_cast<long>(da) * db);
    for (int k = 0; k < r; ++k) {
        double s = std::sqrt(lam[k]);
        for (int x = 0; x < da; ++x)
            for (int y = 0; y < db; ++y)
                psi[static_cast<long>(x) * db + y] += s * u(x, k) * v(y, k);
    }
    psi /= psi.norm();
    return PureState(std::move(psi), {da, db});
}

inline DensityMatrix random_density(const std::vector<int>& dims, int rank,
                                    std::mt19937_64& gen) {
    long d = total_dim(dims);
    Matrix g(d, rank);
    std::normal_distribution<double> gauss;
    for (long i = 0; i < d; ++i)
        for (int k = 0; k < rank; ++k) g(i, k) = Complex(gauss(gen), gauss(gen));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + Matrix(rho.adjoint())) / 2.0;
    return DensityMatrix(std::move(rho), dims);
}

/// Mixture of random Schmidt-rank-<=r pure states (a Schmidt-number-<=r state).
inline DensityMatrix random_bounded_rank_mixture(int d, int r, int terms,
                                                 std::mt19937_64& gen) {
    std::exponential_distribution<double> expo(1.0);
    RealVector p(terms);
    for (int k = 0; k < terms; ++k) p[k] = expo(gen) + 0.1;
    p /= p.sum();
    Matrix rho = Matrix::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
    std::uniform_int_distribution<int> rank_dist(1, r);
    for (int k = 0; k < terms; ++k) {
        PureState psi = random_schmidt_rank_state(d, d, rank_dist(gen), gen);
        rho += p[k] * psi.density();
    }
    rho = (rho + Matrix(rho.adjoint())) / 2.0;
    return DensityMatrix(std::move(rho), {d, d});
}

/// Direct double-sum spectral QFI, kept deliberately naive as an oracle.
inline double naive_qfi(const DensityMatrix& rho, const Matrix& h) {
    auto ev = eigh(rho.matrix);
    long d = rho.dim();
    double eps = 1e-12;
    double total = 0;
    for (long l = 0; l < d; ++l)
        for (long m = 0; m < d; ++m) {
            double ll = std::max(ev.values[l], 0.0), lm = std::max(ev.values[m], 0.0);
            if (ll + lm <= eps) continue;
            Complex amp = ev.vectors.col(l).adjoint() * h * ev.vectors.col(m);
            total += 2.0 * (ll - lm) * (ll - lm) / (ll + lm) * std::norm(amp);
        }
    return total;
}

/// Variance of a Hermitian operator on a pure state.
inline double variance(const PureState& psi, const Matrix& m) {
    Vector mp = m * psi.amplitudes;
    double e = std::real(psi.amplitudes.dot(mp));
    return std::real(mp.dot(mp)) - e * e;
}

inline double min_eigenvalue(const RealMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es((m + m.transpose()) / 2.0);
    return es.eigenvalues().minCoeff();
}

/// Product of single-, Bell- and GHZ-blocks on qubits, optionally rotated by
/// local unitaries. Across every bipartition such states are maximally
/// entangled on their Schmidt support, so h_j = r_j - 2/r_j exactly.
inline PureState random_block_state(int n, std::mt19937_64& gen, bool rotate = true) {
    std::vector<int> sizes;
    int left = n;
    std::uniform_int_distribution<int> block(1, 3);
    while (left > 0) {
        int s = std::min(block(gen), left);
        sizes.push_back(s);
        left -= s;
    }
    std::optional<PureState> psi;
    for (int s : sizes) {
        PureState blockstate = (s == 1) ? product_zero_state({2}) : ghz_state(s, 2);
        psi = psi ? tensor(*psi, blockstate) : blockstate;
    }
    if (!rotate) return *psi;
    Matrix u = random_unitary(2, gen);
    Matrix full = u;
    for (int i = 1; i < n; ++i) full = kron(full, random_unitary(2, gen));
    Vector v = full * psi->amplitudes;
    v /= v.norm();
    return PureState(std::move(v), psi->dims);
}

}  // namespace testutil
