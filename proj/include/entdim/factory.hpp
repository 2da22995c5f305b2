// factory.hpp
// Reference states: maximally entangled states, GHZ states, the rank-2
// saturating mixed state rho_s on 3x3, and the 7-qubit block-product example.

#pragma once

#include <array>

#include "states.hpp"

namespace entdim {

/// (1/sqrt(r)) sum_{i<r} |ii> on d x d.
inline PureState mes_state(int d, int r) {
    if (d < 1) throw std::invalid_argument("mes_state: d must be >= 1");
    if (r < 1 || r > d) throw std::invalid_argument("mes_state: rank must satisfy 1 <= r <= d");
    Vector v = Vector::Zero(static_cast<long>(d) * d);
    double amp = 1.0 / std::sqrt(static_cast<double>(r));
    for (int i = 0; i < r; ++i) v[static_cast<long>(i) * d + i] = amp;
    return PureState(std::move(v), {d, d});
}

inline PureState bell_state() { return mes_state(2, 2); }

/// (1/sqrt(d)) sum_i |i...i> on n qudits of local dimension d.
inline PureState ghz_state(int n, int d) {
    if (n < 2) throw std::invalid_argument("ghz_state: need at least two parties");
    if (d < 2) throw std::invalid_argument("ghz_state: local dimension must be >= 2");
    std::vector<int> dims(n, d);
    MultiIndex idx(dims);
    Vector v = Vector::Zero(idx.total());
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        long f = 0;
        for (int k = 0; k < n; ++k) f += i * idx.stride(k);
        v[f] = amp;
    }
    return PureState(std::move(v), std::move(dims));
}

/// Mixture sum_i p_i |psi_i><psi_i| of the three rank-2 states
/// (|00>-|11>)/sqrt2, (|12>+|20>)/sqrt2, (|02>+|21>)/sqrt2 on 3x3.
/// Saturates the h bound at r=2 for every valid p.
inline DensityMatrix rho_s(const std::array<double, 3>& p) {
    double sum = 0;
    for (double pi : p) {
        if (pi < -1e-9) throw std::invalid_argument("rho_s: probabilities must be nonnegative");
        sum += pi;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("rho_s: probabilities must sum to 1");

    const double s = 1.0 / std::sqrt(2.0);
    auto ket = [&](std::initializer_list<std::pair<int, double>> terms) {
        Vector v = Vector::Zero(9);
        for (auto [idx, amp] : terms) v[idx] = amp;
        return v;
    };
    // |ab> has flat index 3a + b
    Vector psi1 = ket({{0, s}, {4, -s}});
    Vector psi2 = ket({{5, s}, {6, s}});
    Vector psi3 = ket({{2, s}, {7, s}});

    Matrix rho = p[0] * (psi1 * psi1.adjoint()) + p[1] * (psi2 * psi2.adjoint()) +
                 p[2] * (psi3 * psi3.adjoint());
    return DensityMatrix(std::move(rho), {3, 3});
}

/// (1/(2 sqrt 2)) (|0>+|1>) (x) (|00>+|11>) (x) (|0000>+|1111>), seven qubits.
inline PureState seven_qubit_state() {
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    PureState p1(plus, {2});

    Vector b = Vector::Zero(4);
    b[0] = b[3] = 1.0 / std::sqrt(2.0);
    PureState p23(b, {2, 2});

    Vector g = Vector::Zero(16);
    g[0] = g[15] = 1.0 / std::sqrt(2.0);
    PureState p4567(g, {2, 2, 2, 2});

    return tensor(tensor(p1, p23), p4567);
}

/// |0...0> on the given subsystem dimensions.
inline PureState product_zero_state(const std::vector<int>& dims) {
    Vector v = Vector::Zero(total_dim(dims));
    v[0] = 1.0;
    return PureState(std::move(v), dims);
}

inline DensityMatrix maximally_mixed(const std::vector<int>& dims) {
    long d = total_dim(dims);
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d), dims);
}

}  // namespace entdim
