// lp.hpp
// Small dense simplex solver for equality-form linear programs,
//   min c.x  s.t.  A x = b,  x >= 0,
// with Bland's rule for termination. Used for the per-class feasibility
// programs in the dimensionality-vector certification; problem sizes there
// stay in the low hundreds of variables.

#pragma once

#include "core.hpp"

namespace entdim::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
    Status status = Status::infeasible;
    RealVector x;
    double objective = 0;
};

namespace detail {

// One simplex phase on tableau rows [A | b] with explicit cost vector.
// basis[i] is the variable occupying row i. Returns false on unboundedness.
inline bool run_simplex(RealMatrix& t, std::vector<int>& basis, const RealVector& cost,
                        double eps) {
    const int m = static_cast<int>(t.rows());
    const int n = static_cast<int>(t.cols()) - 1;
    for (int iter = 0;; ++iter) {
        if (iter > 50000) throw std::runtime_error("simplex: iteration limit exceeded");

        // reduced costs r_j = c_j - c_B . T_col(j); Bland: smallest improving index
        RealVector cb(m);
        for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
        int enter = -1;
        for (int j = 0; j < n; ++j) {
            double rj = cost[j] - cb.dot(t.col(j));
            if (rj < -eps) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;   // optimal

        int leave = -1;
        double best_ratio = 0;
        for (int i = 0; i < m; ++i) {
            double a = t(i, enter);
            if (a > eps) {
                double ratio = t(i, n) / a;
                if (leave < 0 || ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return false;   // unbounded

        t.row(leave) /= t(leave, enter);
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = t(i, enter);
            if (f != 0.0) t.row(i) -= f * t.row(leave);
        }
        basis[leave] = enter;
    }
}

}  // namespace detail

/// Solve min c.x s.t. A x = b, x >= 0 by the two-phase simplex method.
inline Result solve(const RealMatrix& a_in, const RealVector& b_in, const RealVector& c,
                    double eps = 1e-9) {
    const int m = static_cast<int>(a_in.rows());
    const int n = static_cast<int>(a_in.cols());
    if (b_in.size() != m || c.size() != n)
        throw std::invalid_argument("lp::solve: inconsistent problem dimensions");

    // tableau with artificial columns appended; rows flipped so b >= 0
    RealMatrix t(m, n + m + 1);
    t.setZero();
    for (int i = 0; i < m; ++i) {
        double sgn = (b_in[i] < 0) ? -1.0 : 1.0;
        t.row(i).head(n) = sgn * a_in.row(i);
        t(i, n + i) = 1.0;
        t(i, n + m) = sgn * b_in[i];
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // phase 1: minimize the sum of artificials
    RealVector phase1_cost = RealVector::Zero(n + m);
    phase1_cost.tail(m).setOnes();
    detail::run_simplex(t, basis, phase1_cost, eps);
    double infeas = 0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) infeas += t(i, n + m);
    Result res;
    if (infeas > 1e-7) {
        res.status = Status::infeasible;
        return res;
    }

    // pivot any leftover artificials (value ~0) out of the basis if possible
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        int enter = -1;
        for (int j = 0; j < n; ++j)
            if (std::abs(t(i, j)) > eps) {
                enter = j;
                break;
            }
        if (enter < 0) continue;   // redundant row
        t.row(i) /= t(i, enter);
        for (int k = 0; k < m; ++k) {
            if (k == i) continue;
            double f = t(k, enter);
            if (f != 0.0) t.row(k) -= f * t.row(i);
        }
        basis[i] = enter;
    }

    // phase 2 on the original objective; forbid artificials from re-entering
    RealVector phase2_cost = RealVector::Zero(n + m);
    phase2_cost.head(n) = c;
    RealMatrix t2 = t;
    // zero out artificial columns so they can never price in again
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) t2.col(basis[i]).setZero(), t2(i, basis[i]) = 1.0;
    for (int j = n; j < n + m; ++j) {
        bool basic = false;
        for (int i = 0; i < m; ++i) basic |= (basis[i] == j);
        if (!basic) t2.col(j).setZero();
    }
    bool bounded = detail::run_simplex(t2, basis, phase2_cost, eps);

    res.x = RealVector::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t2(i, n + m);
    res.objective = c.dot(res.x);
    res.status = bounded ? Status::optimal : Status::unbounded;
    return res;
}

/// Feasibility of A x = b, x >= 0 (phase 1 only).
inline bool feasible(const RealMatrix& a, const RealVector& b, double eps = 1e-9) {
    return solve(a, b, RealVector::Zero(a.cols()), eps).status != Status::infeasible;
}

}  // namespace entdim::lp
