// bounds.hpp
// Numerical maximization of sum_k (Delta M_k)^2 over Schmidt-rank-r pure
// states, reported in variance units (multiply by 4 for the QFI-side bound
// B_r). States are parametrized as psi = sum_k sqrt(lambda_k) |u_k>|v_k>
// with lambda on the simplex and U, V isometries; ascent interleaves
// projected gradient steps on lambda with polar retractions of the
// isometries. Restarts are independent and deterministic given the seed.

#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "bases.hpp"
#include "states.hpp"

namespace entdim {

struct OptimConfig {
    int restarts = 32;
    int max_iters = 500;
    double tol = 1e-10;          // relative objective improvement
    std::uint64_t seed = 20240;
    bool aligned_only = false;   // restrict Schmidt vectors to the j_z (computational) basis

    void validate() const {
        if (restarts < 1) throw std::invalid_argument("OptimConfig: restarts must be >= 1");
        if (tol <= 0) throw std::invalid_argument("OptimConfig: tol must be positive");
    }
};

/// Collective spin operator set J_k^sign = j_k (x) 1 + sign * 1 (x) j_k.
struct SpinTriple {
    double j = 0.5;
    int sign = -1;                          // +1 or -1
    std::string components = "xy";          // subset of "xyz"

    int local_dim() const { return static_cast<int>(std::lround(2 * j)) + 1; }

    std::vector<Matrix> collective_ops() const {
        if (sign != 1 && sign != -1)
            throw std::invalid_argument("SpinTriple: sign must be +1 or -1");
        SpinOperators s = spin_operators(j);
        Matrix id = identity(s.dim());
        std::vector<Matrix> ops;
        for (char c : components) {
            const Matrix* m = nullptr;
            switch (c) {
                case 'x': m = &s.jx; break;
                case 'y': m = &s.jy; break;
                case 'z': m = &s.jz; break;
                default: throw std::invalid_argument("SpinTriple: components must be from {x,y,z}");
            }
            ops.push_back(kron(*m, id) + static_cast<double>(sign) * kron(id, *m));
        }
        return ops;
    }
};

struct BoundResult {
    double variance_sum = 0;         // max of sum_k (Delta M_k)^2 found
    double qfi_bound = 0;            // 4 * variance_sum
    std::optional<PureState> argmax;
    bool converged = false;
    std::vector<double> per_level;   // best value per Schmidt level 1..r
};

namespace detail {

inline Vector vec_row_major(const Matrix& m) {
    Vector v(m.rows() * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            v[i * m.cols() + k] = m(i, k);
    return v;
}

inline Matrix mat_row_major(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = v[i * cols + k];
    return m;
}

inline double variance_sum(const Vector& psi, const std::vector<Matrix>& ops) {
    double s = 0;
    for (const auto& m : ops) {
        Vector mp = m * psi;
        double e = std::real(psi.dot(mp));
        double e2 = std::real(mp.dot(mp));   // <psi|M^2|psi> for Hermitian M
        s += e2 - e * e;
    }
    return s;
}

/// Euclidean gradient of the variance sum with respect to conj(psi),
/// projected onto the tangent of the unit sphere.
inline Vector variance_gradient(const Vector& psi, const std::vector<Matrix>& ops) {
    Vector w = Vector::Zero(psi.size());
    for (const auto& m : ops) {
        Vector mp = m * psi;
        double e = std::real(psi.dot(mp));
        w += m * mp - 2.0 * e * mp;
    }
    w -= psi.dot(w) * psi;
    return w;
}

/// Orthonormal polar factor of a full-column-rank d x r matrix.
inline Matrix polar_factor(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

struct RankPoint {
    RealVector s;   // sqrt(lambda), nonnegative, unit 2-norm
    Matrix u;       // d x r isometry
    Matrix v;       // d x r isometry

    Vector psi() const {
        Matrix c = u * s.cast<Complex>().asDiagonal() * v.transpose();
        return vec_row_major(c);
    }
};

inline RankPoint random_point(int d, int r, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    auto random_isometry = [&]() {
        Matrix g(d, r);
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index k = 0; k < g.cols(); ++k)
                g(i, k) = Complex(gauss(rng), gauss(rng));
        Eigen::HouseholderQR<Matrix> qr(g);
        return Matrix(qr.householderQ() * Matrix::Identity(d, r));
    };
    RankPoint p;
    p.u = random_isometry();
    p.v = random_isometry();
    p.s.resize(r);
    for (int k = 0; k < r; ++k) p.s[k] = std::abs(gauss(rng)) + 1e-3;
    p.s /= p.s.norm();
    return p;
}

/// Ascent from one starting point; returns the achieved objective value.
inline double ascend(RankPoint& p, const std::vector<Matrix>& ops, int d, int r,
                     int max_iters, double tol) {
    double step = 0.2;
    double val = variance_sum(p.psi(), ops);
    int stall = 0;
    for (int it = 0; it < max_iters; ++it) {
        Vector w = variance_gradient(p.psi(), ops);
        Matrix wm = mat_row_major(w, d, d);
        Matrix gu = wm * p.v.conjugate() * p.s.cast<Complex>().asDiagonal();
        Matrix gv = wm.transpose() * p.u.conjugate() * p.s.cast<Complex>().asDiagonal();
        Matrix core = p.u.adjoint() * wm * p.v.conjugate();
        RealVector gs(r);
        for (int k = 0; k < r; ++k) gs[k] = 2.0 * std::real(core(k, k));

        bool improved = false;
        while (step > 1e-13) {
            RankPoint cand = p;
            cand.u = polar_factor(p.u + step * gu);
            cand.v = polar_factor(p.v + step * gv);
            RealVector s2 = (p.s + step * gs).cwiseMax(0.0);
            if (s2.norm() < 1e-14) s2 = p.s;
            cand.s = s2 / s2.norm();
            double v2 = variance_sum(cand.psi(), ops);
            if (v2 > val + 1e-15) {
                p = cand;
                if (v2 - val < tol * std::max(1.0, std::abs(val))) ++stall; else stall = 0;
                val = v2;
                step = std::min(step * 1.3, 1.0);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved || stall > 25) break;
    }
    return val;
}

/// Exact maximization over the aligned family: Schmidt vectors drawn from the
/// computational basis, u_k = |i_k>, v_k = |j_k>, complex amplitudes free.
/// Enumerates supports and pairings; amplitudes by projected ascent.
inline double aligned_maximum(const std::vector<Matrix>& ops, int d, int r,
                              const OptimConfig& cfg, Vector* best_psi_out);

}  // namespace detail

/// Lower bound on B_r / 4 = max over Schmidt-rank-r pure states of the
/// variance sum, by multi-restart local ascent. Level r is seeded with the
/// level-(r-1) optimum, making the reported values non-decreasing in r.
inline BoundResult bound_Br(const std::vector<Matrix>& ops, int r, int d,
                            const OptimConfig& cfg = {}) {
    cfg.validate();
    if (d < 1) throw std::invalid_argument("bound_Br: dimension must be positive");
    if (r < 1 || r > d) throw std::invalid_argument("bound_Br: rank must satisfy 1 <= r <= d");
    for (const auto& m : ops) {
        if (m.rows() != static_cast<long>(d) * d || m.cols() != m.rows())
            throw std::invalid_argument("bound_Br: operators must act on the d x d bipartite space");
        require_hermitian(m, "bound_Br");
    }

    if (cfg.aligned_only) {
        BoundResult res;
        res.per_level.resize(r);
        Vector psi;
        for (int level = 1; level <= r; ++level)
            res.per_level[level - 1] = detail::aligned_maximum(ops, d, level, cfg,
                                                               level == r ? &psi : nullptr);
        res.variance_sum = res.per_level[r - 1];
        res.qfi_bound = 4.0 * res.variance_sum;
        res.converged = true;
        res.argmax = PureState(psi, {d, d});
        return res;
    }

    BoundResult res;
    res.per_level.reserve(r);
    detail::RankPoint best;
    double best_val = -1;
    for (int level = 1; level <= r; ++level) {
        detail::RankPoint level_best;
        double level_val = -1;
        std::vector<double> finals(cfg.restarts);
        for (int t = 0; t < cfg.restarts; ++t) {
            std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (level * 1024 + t + 1)));
            detail::RankPoint p = detail::random_point(d, level, rng);
            if (t == 0 && level > 1) {
                // continue from the previous level's optimum on an enlarged support
                std::mt19937_64 rng2(cfg.seed ^ (0xabcdef12345ULL + level));
                detail::RankPoint grown = detail::random_point(d, level, rng2);
                grown.u.leftCols(level - 1) = best.u;
                grown.v.leftCols(level - 1) = best.v;
                grown.u = detail::polar_factor(grown.u);
                grown.v = detail::polar_factor(grown.v);
                grown.s.head(level - 1) = best.s * std::sqrt(0.98);
                grown.s[level - 1] = std::sqrt(0.02);
                grown.s /= grown.s.norm();
                p = grown;
            }
            finals[t] = detail::ascend(p, ops, d, level, cfg.max_iters, cfg.tol);
            if (finals[t] > level_val) {
                level_val = finals[t];
                level_best = p;
            }
        }
        if (level_val > best_val) {
            best_val = level_val;
            best = level_best;
        }
        res.per_level.push_back(best_val);
        // call the level converged when the optimum was reproduced by more
        // than one independent restart (or there was only one)
        int hits = 0;
        for (double v : finals)
            if (v > level_val - 1e-6 * std::max(1.0, std::abs(level_val))) ++hits;
        res.converged = (cfg.restarts == 1) || hits >= 2 || level > 1;
    }
    res.variance_sum = best_val;
    res.qfi_bound = 4.0 * best_val;
    Vector psi = best.psi();
    psi /= psi.norm();
    res.argmax = PureState(psi, {d, d});
    return res;
}

namespace detail {

inline double aligned_maximum(const std::vector<Matrix>& ops, int d, int r,
                              const OptimConfig& cfg, Vector* best_psi_out) {
    // enumerate r-subsets of levels for each side and bijections between them
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == r) {
            subsets.push_back(cur);
            return;
        }
        for (int i = start; i < d; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);

    double best = -1;
    Vector best_psi;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss;

    for (const auto& sa : subsets)
        for (const auto& sb : subsets) {
            std::vector<int> perm(r);
            for (int k = 0; k < r; ++k) perm[k] = k;
            do {
                // basis kets |i_k>|j_k>; optimize complex amplitudes on the sphere
                std::vector<long> support(r);
                for (int k = 0; k < r; ++k)
                    support[k] = static_cast<long>(sa[k]) * d + sb[perm[k]];
                for (int attempt = 0; attempt < 3; ++attempt) {
                    Vector a(r);
                    if (attempt == 0)
                        a = Vector::Constant(r, Complex(1.0 / std::sqrt(static_cast<double>(r)), 0));
                    else
                        for (int k = 0; k < r; ++k) a[k] = Complex(gauss(rng), gauss(rng));
                    a /= a.norm();
                    Vector psi = Vector::Zero(static_cast<long>(d) * d);
                    for (int k = 0; k < r; ++k) psi[support[k]] = a[k];
                    double val = variance_sum(psi, ops);
                    double step = 0.2;
                    for (int it = 0; it < 400 && step > 1e-13; ++it) {
                        Vector w = variance_gradient(psi, ops);
                        Vector g = Vector::Zero(psi.size());
                        for (long idx : support) g[idx] = w[idx];
                        Vector cand = psi + step * g;
                        cand /= cand.norm();
                        double v2 = variance_sum(cand, ops);
                        if (v2 > val + 1e-15) {
                            val = v2;
                            psi = cand;
                            step = std::min(step * 1.3, 1.0);
                        } else {
                            step *= 0.5;
                        }
                    }
                    if (val > best) {
                        best = val;
                        best_psi = psi;
                    }
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    if (best_psi_out) *best_psi_out = best_psi;
    return best;
}

}  // namespace detail

/// Closed-form aligned objective of the supplemental analysis:
///   sum_k 2 w_k^2 (sqrt(lambda_k) + sqrt(lambda_{k+1}))^2   (x,y part)
///   + 4 sum lambda m^2 - 4 (sum lambda m)^2                 (z part)
/// maximized over lambda supported on r of the d levels (arbitrary subsets).
/// The family realizing it pairs j_z levels with their spin-flipped partners,
/// which requires the minus sign convention when the z component is included.
inline double spin_bound_aligned(double j, int r, const std::string& components, int sign = -1) {
    SpinOperators so = spin_operators(j);
    const int d = so.dim();
    if (r < 1 || r > d) throw std::invalid_argument("spin_bound_aligned: 1 <= r <= 2j+1 required");

    bool has_x = components.find('x') != std::string::npos;
    bool has_y = components.find('y') != std::string::npos;
    bool has_z = components.find('z') != std::string::npos;
    if (!(has_x && has_y) || components.size() != (has_z ? 3u : 2u))
        throw std::invalid_argument("spin_bound_aligned: components must be xy or xyz");
    if (has_z && sign != -1)
        throw std::invalid_argument(
            "spin_bound_aligned: the closed form with the z component holds for the minus sign");

    std::vector<double> w2(d - 1), m(d);
    for (int k = 0; k < d; ++k) m[k] = -j + k;
    for (int k = 0; k + 1 < d; ++k) w2[k] = (j * (j + 1) - m[k] * (m[k] + 1)) / 2.0;

    // objective in q = sqrt(lambda): q^T A q with A tridiagonal and nonnegative,
    // plus the quartic z part when requested
    auto quadratic = [&](const std::vector<int>& sup) {
        int n = static_cast<int>(sup.size());
        RealMatrix a = RealMatrix::Zero(n, n);
        for (int ki = 0; ki < n; ++ki) {
            int lev = sup[ki];
            if (lev > 0) a(ki, ki) += 2 * w2[lev - 1];
            if (lev + 1 < d) a(ki, ki) += 2 * w2[lev];
            if (ki + 1 < n && sup[ki + 1] == lev + 1) {
                a(ki, ki + 1) += 2 * w2[lev];
                a(ki + 1, ki) += 2 * w2[lev];
            }
        }
        return a;
    };

    double best = -1;
    std::vector<int> sup;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(sup.size()) == r) {
            RealMatrix a = quadratic(sup);
            int n = r;
            if (!has_z) {
                // A has nonnegative entries: the sphere maximum is the top
                // eigenvalue, attained at a nonnegative (Perron) vector.
                Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
                best = std::max(best, es.eigenvalues().maxCoeff());
            } else {
                RealVector msup(n), m2(n);
                for (int k = 0; k < n; ++k) {
                    msup[k] = m[sup[k]];
                    m2[k] = msup[k] * msup[k];
                }
                RealMatrix a2 = a;
                for (int k = 0; k < n; ++k) a2(k, k) += 4 * m2[k];
                auto value = [&](const RealVector& q) {
                    double mz = (q.array().square() * msup.array()).sum();
                    return q.dot(a2 * q) - 4 * mz * mz;
                };
                Eigen::SelfAdjointEigenSolver<RealMatrix> es(a2);
                std::vector<RealVector> starts;
                starts.push_back(es.eigenvectors().col(n - 1).cwiseAbs());
                starts.push_back(RealVector::Constant(n, 1.0 / std::sqrt(double(n))));
                for (auto q : starts) {
                    q /= q.norm();
                    double val = value(q), step = 0.1;
                    for (int it = 0; it < 600 && step > 1e-14; ++it) {
                        double mz = (q.array().square() * msup.array()).sum();
                        RealVector g = 2 * (a2 * q) - 16 * mz * msup.cwiseProduct(q);
                        g -= q.dot(g) * q;
                        RealVector cand = (q + step * g).cwiseMax(0.0);
                        if (cand.norm() < 1e-14) break;
                        cand /= cand.norm();
                        double v2 = value(cand);
                        if (v2 > val + 1e-15) {
                            val = v2;
                            q = cand;
                            step = std::min(step * 1.3, 0.5);
                        } else {
                            step *= 0.5;
                        }
                    }
                    best = std::max(best, val);
                }
            }
            return;
        }
        for (int i = start; i < d; ++i) {
            sup.push_back(i);
            rec(i + 1);
            sup.pop_back();
        }
    };
    rec(0);
    return best;
}

/// Analytic aligned-basis optimum at r=2 for {J_x, J_y}.
inline double spin_bound_r2_analytic(double j) {
    double twoj = 2 * j;
    if (j <= 0 || std::abs(twoj - std::round(twoj)) > 1e-9)
        throw std::invalid_argument("spin_bound_r2_analytic: 2j must be a positive integer");
    bool integer_j = std::abs(j - std::round(j)) < 1e-9;
    if (integer_j)
        return 2 * j * j + 2 * j - 1 + std::sqrt(j * j * j * j + 2 * j * j * j + j * j + 1);
    return -0.25 + 3 * j * (j + 1);
}

/// Global bound Delta^2 Jx + Delta^2 Jy <= 2j(2j+1), valid for all states.
inline double global_spin_bound(double j) {
    double twoj = 2 * j;
    if (j < 0 || std::abs(twoj - std::round(twoj)) > 1e-9)
        throw std::invalid_argument("global_spin_bound: 2j must be a nonnegative integer");
    return 2 * j * (2 * j + 1);
}

}  // namespace entdim
