// witnesses.hpp
// Scalar Schmidt-number criteria for bipartite d x d states.
//
// For a state with Schmidt number <= r the following hold:
//   tr(F_a) <= 4 (d - 1/r)
//   tr(F_b) <= 4 (d - 1/r)
//   h(rho)  <= r - 1/r   with
//   h = tr|X|/4 - sqrt( (d - 1/r - tr F_a/4) (d - 1/r - tr F_b/4) )
// together with the collective-QFI bound
//   sum_i F(g_i (x) 1 + 1 (x) g_i) <= 8 (d + r - 2/r).
// Violating any of them at r certifies Schmidt number > r.

#pragma once

#include "factory.hpp"
#include "qfim.hpp"

namespace entdim {

struct PerRankVerdict {
    int r = 0;
    double bound_5a = 0;   // 4 (d - 1/r), shared by 5a and 5b
    double bound_5c = 0;   // r - 1/r
    double bound_7 = 0;    // 8 (d + r - 2/r)
    double h = 0;          // h evaluated at this r (clamped factors)
    bool violated_5a = false;
    bool violated_5b = false;
    bool violated_5c = false;
    bool violated_7 = false;

    bool any_violated() const {
        return violated_5a || violated_5b || violated_5c || violated_7;
    }
};

struct WitnessReport {
    int d = 0;
    double tr_fa = 0;
    double tr_fb = 0;
    double tr_norm_x = 0;
    double h_value = 0;    // h at r = certified_min_schmidt_number
    double obs2_sum = 0;   // sum_i F(G_i); negative if not evaluated
    std::vector<PerRankVerdict> per_r;
    int certified_min_schmidt_number = 1;
};

namespace detail {

inline double h_at(double d, int r, double ta, double tb, double tx) {
    // Negative factors already falsify the hypothesis via 5a/5b; clamp them
    // to zero so h stays real.
    double fa = std::max(d - 1.0 / r - ta / 4.0, 0.0);
    double fb = std::max(d - 1.0 / r - tb / 4.0, 0.0);
    return tx / 4.0 - std::sqrt(fa * fb);
}

inline bool exceeds(double value, double bound) {
    return value > bound + tol::violation_margin * std::max(1.0, std::abs(bound));
}

}  // namespace detail

inline double obs2_bound(int d, int r) {
    return 8.0 * (d + r - 2.0 / r);
}

/// Sum of collective QFIs sum_i F(g_i^a (x) 1 + 1 (x) g_i^b). Bases may be the
/// full d^2-element sets (the identity contributes zero) or traceless ones.
inline double obs2_value(const DensityMatrix& rho, const BasisSet& basis_a,
                         const BasisSet& basis_b) {
    if (rho.num_parties() != 2)
        throw std::invalid_argument("obs2_value: state must be bipartite");
    if (basis_a.size() != basis_b.size())
        throw std::invalid_argument("obs2_value: basis size mismatch");
    RealMatrix f = qfim(rho, collective_ops(basis_a, basis_b));
    return f.trace();
}

/// Full witness report: Observation 1 inequalities per candidate rank plus the
/// collective-QFI bound, aggregated into a certified minimal Schmidt number.
inline WitnessReport obs1_report(const DensityMatrix& rho, const BasisSet& basis_a,
                                 const BasisSet& basis_b) {
    if (rho.num_parties() != 2)
        throw std::invalid_argument("obs1_report: state must be bipartite");
    if (rho.dims[0] != rho.dims[1])
        throw std::invalid_argument("obs1_report: unequal local dimensions are unsupported");

    const int d = rho.dims[0];
    QfimBlocks blocks = qfim_blocks(rho, basis_a, basis_b);

    WitnessReport rep;
    rep.d = d;
    rep.tr_fa = blocks.f_a.trace();
    rep.tr_fb = blocks.f_b.trace();
    rep.tr_norm_x = trace_norm(blocks.x);
    rep.obs2_sum = rep.tr_fa + rep.tr_fb + 2.0 * blocks.x.trace();

    int max_violated = 0;
    for (int r = 1; r <= d; ++r) {
        PerRankVerdict v;
        v.r = r;
        v.bound_5a = 4.0 * (d - 1.0 / r);
        v.bound_5c = r - 1.0 / r;
        v.bound_7 = obs2_bound(d, r);
        v.h = detail::h_at(d, r, rep.tr_fa, rep.tr_fb, rep.tr_norm_x);
        v.violated_5a = detail::exceeds(rep.tr_fa, v.bound_5a);
        v.violated_5b = detail::exceeds(rep.tr_fb, v.bound_5a);
        v.violated_5c = detail::exceeds(v.h, v.bound_5c);
        v.violated_7 = detail::exceeds(rep.obs2_sum, v.bound_7);
        if (v.any_violated()) max_violated = r;
        rep.per_r.push_back(v);
    }
    rep.certified_min_schmidt_number = max_violated + 1;
    int r_star = std::min(rep.certified_min_schmidt_number, d);
    rep.h_value = rep.per_r[r_star - 1].h;
    return rep;
}

/// Single-QFI ceiling for F(A (x) 1 + 1 (x) B) over states of Schmidt number r.
/// Constant in r for r >= 2: the Schmidt number cannot be told apart by one
/// collective QFI.
inline double nogo_bound(const Matrix& a, const Matrix& b, int r) {
    if (r < 1) throw std::invalid_argument("nogo_bound: rank must be >= 1");
    require_hermitian(a, "nogo_bound");
    require_hermitian(b, "nogo_bound");
    auto ea = eigh(a), eb = eigh(b);
    double span_a = ea.values.maxCoeff() - ea.values.minCoeff();
    double span_b = eb.values.maxCoeff() - eb.values.minCoeff();
    if (r == 1) return span_a * span_a + span_b * span_b;
    double s = span_a + span_b;
    return s * s;
}

/// Bell-type state saturating the r >= 2 no-go bound:
/// (|mu_max^a, mu_max^b> + |mu_min^a, mu_min^b>)/sqrt2.
inline PureState nogo_saturating_state(const Matrix& a, const Matrix& b) {
    auto ea = eigh(a), eb = eigh(b);
    long da = a.rows(), db = b.rows();
    Vector top = kron(Matrix(ea.vectors.col(da - 1)), Matrix(eb.vectors.col(db - 1))).col(0);
    Vector bot = kron(Matrix(ea.vectors.col(0)), Matrix(eb.vectors.col(0))).col(0);
    Vector v = (top + bot) / std::sqrt(2.0);
    return PureState(std::move(v), {static_cast<int>(da), static_cast<int>(db)});
}

struct TwoTangleBound {
    double value = 0;       // clamped at zero for reporting
    double unclamped = 0;   // max{tr F_a, tr F_b}/2 - 2(d-1); equality for pure states
};

/// Lower bound on the 2-tangle from the local QFIM traces.
inline TwoTangleBound two_tangle_lower_bound(const DensityMatrix& rho) {
    if (rho.num_parties() != 2)
        throw std::invalid_argument("two_tangle_lower_bound: state must be bipartite");
    BasisSet ga = gellmann_basis(rho.dims[0]);
    BasisSet gb = gellmann_basis(rho.dims[1]);
    QfimBlocks blocks = qfim_blocks(rho, ga, gb);
    double va = blocks.f_a.trace() / 2.0 - 2.0 * (rho.dims[0] - 1);
    double vb = blocks.f_b.trace() / 2.0 - 2.0 * (rho.dims[1] - 1);
    TwoTangleBound out;
    out.unclamped = std::max(va, vb);
    out.value = std::max(out.unclamped, 0.0);
    return out;
}

/// Recombine the bases by the orthogonal factors of the SVD of the cross block,
/// making it diagonal with nonnegative entries; then tr(X) = tr|X| and the
/// collective-QFI criterion becomes as strong as the trace-norm one whenever
/// tr F_a = tr F_b.
inline std::pair<BasisSet, BasisSet> optimize_local_bases(const DensityMatrix& rho,
                                                          const BasisSet& basis_a,
                                                          const BasisSet& basis_b) {
    QfimBlocks blocks = qfim_blocks(rho, basis_a, basis_b);
    Eigen::JacobiSVD<RealMatrix> svd(blocks.x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {basis_a.recombined(svd.matrixU()), basis_b.recombined(svd.matrixV())};
}

}  // namespace entdim
