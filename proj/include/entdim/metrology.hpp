// metrology.hpp
// Multiparameter estimation corollaries: the trace uncertainty relation
// (sum of estimator variances) * (sum of QFIs) >= K^2, the error-propagation
// lower bound on a single QFI, and the Schmidt-number precision floor.

#pragma once

#include <optional>

#include "qfim.hpp"

namespace entdim {

struct EstimationScenario {
    std::vector<Matrix> generators;
    DensityMatrix probe;
    std::optional<Matrix> readout;
};

struct QcrbTraceBound {
    int k = 0;                      // number of parameters
    double sum_qfi = 0;             // sum_i F(H_i)
    double bound = 0;               // K^2 / sum_i F(H_i)
    double qfim_pinv_trace = 0;     // tr of the pseudo-inverse QFIM on its support
    int non_identifiable = 0;       // parameters outside the QFIM support
    bool unbounded = false;         // all-zero QFIM: no finite bound exists
};

/// Lower bound K^2 / sum_i F(H_i) on the total estimation variance, together
/// with tr(QFIM^+) (which always dominates it).
inline QcrbTraceBound qcrb_trace_bound(const EstimationScenario& sc) {
    if (sc.generators.empty())
        throw std::invalid_argument("qcrb_trace_bound: no generators");
    RealMatrix f = qfim(sc.probe, sc.generators);
    QcrbTraceBound out;
    out.k = static_cast<int>(sc.generators.size());
    out.sum_qfi = f.trace();

    auto ev = eigh(f.cast<Complex>());
    double cutoff = 1e-10 * std::max(ev.values.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < ev.values.size(); ++i) {
        if (ev.values[i] > cutoff)
            out.qfim_pinv_trace += 1.0 / ev.values[i];
        else
            ++out.non_identifiable;
    }
    if (out.sum_qfi <= cutoff) {
        out.unbounded = true;
        out.bound = std::numeric_limits<double>::infinity();
        return out;
    }
    out.bound = static_cast<double>(out.k) * out.k / out.sum_qfi;
    return out;
}

/// Error-propagation sensitivity |<[O,H]>|^2 / (Delta O)^2, a lower bound on
/// the QFI of H. Throws when the readout variance vanishes.
inline double error_propagation_qfi_lb(const DensityMatrix& rho, const Matrix& h,
                                       const Matrix& o, double var_eps = 1e-12) {
    require_hermitian(h, "error_propagation_qfi_lb");
    require_hermitian(o, "error_propagation_qfi_lb");
    if (h.rows() != rho.dim() || o.rows() != rho.dim())
        throw std::invalid_argument("error_propagation_qfi_lb: dimension mismatch");

    Matrix comm = o * h - h * o;
    Complex mean_comm = (rho.matrix * comm).trace();
    double mean_o = (rho.matrix * o).trace().real();
    double mean_o2 = (rho.matrix * o * o).trace().real();
    double var_o = mean_o2 - mean_o * mean_o;
    if (var_o <= var_eps)
        throw std::domain_error("error_propagation_qfi_lb: readout variance vanishes");
    return std::norm(mean_comm) / var_o;
}

/// Precision floor for estimating K = d^2 - 1 collective su(d) phases with a
/// probe of Schmidt number at most r:
///   sum_i delta^2 theta_i >= (d^2-1)^2 r / (8 (r^2 + d r - 2)).
inline double multiparam_precision_floor(int d, int r) {
    if (d < 2) throw std::invalid_argument("multiparam_precision_floor: d must be >= 2");
    if (r < 1 || r > d)
        throw std::invalid_argument("multiparam_precision_floor: 1 <= r <= d required");
    double k = static_cast<double>(d) * d - 1;
    return k * k * r / (8.0 * (static_cast<double>(r) * r + static_cast<double>(d) * r - 2));
}

}  // namespace entdim
